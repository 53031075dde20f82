from itertools import product

import pytest

from qcring.core.errors import (
    ExponentOutOfRange,
    InvalidGroupTable,
    InvalidPartition,
    NonIntegerIota,
    NonIntegerSignExponent,
    NotAnInvolution,
    NotHermitian,
    SectorMismatch,
)
from qcring.core.scalars import I, ONE, ZERO, gauss, i_pow, rational
from qcring.models.algebra import BasisElement, PairingMatrix
from qcring.models.sector import HermitianMatrix
from qcring.services.bundles import classical_structure
from qcring.services.graded_algebra import algebra_from_products
from qcring.services.isomorphism import verify_map
from qcring.services.sector_model import (
    age,
    class_map,
    conjugacy_classes,
    epsilon_sign,
    epsilon_table,
    hermitian_gram,
    inverse_class,
    iota_table,
    is_positive_definite,
    make_group,
    perm_degree_shift,
    qinwang_map,
    sector_algebra,
    signed_product,
    standard_group,
)


def transposition_algebra(iota_t=1):
    """S2 toy ring: 1, a twisted class t with t*t = p, and p in the untwisted sector."""
    basis = [
        BasisElement("1", rational(0)),
        BasisElement("t", rational(2), "t"),
        BasisElement("p", rational(4)),
    ]
    e, t, p = (ONE, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, ONE)
    products = {(0, 0): e, (0, 1): t, (1, 0): t, (0, 2): p, (2, 0): p, (1, 1): p}
    algebra = algebra_from_products(basis, 0, None, products)
    group = make_group(["e", "t"], [[0, 1], [1, 0]])
    return algebra, group, iota_table(group, {1: rational(iota_t)})


def test_conjugacy_classes():
    assert len(conjugacy_classes(standard_group("Z2"))) == 2
    assert len(conjugacy_classes(standard_group("Z3"))) == 3
    classes = conjugacy_classes(standard_group("S3"))
    assert sorted(c.size for c in classes) == [1, 2, 3]
    assert sorted(c.centralizer_order for c in classes) == [2, 3, 6]


def test_class_sizes_times_centralizers(group):
    for cls in conjugacy_classes(group):
        assert cls.size * cls.centralizer_order == group.order


def test_inverse_class_of_a_three_cycle():
    s3 = standard_group("S3")
    three_cycle = s3.index("p120")
    representative = class_map(s3)[three_cycle]
    assert inverse_class(s3, representative) == representative


def test_invalid_group_tables():
    with pytest.raises(InvalidGroupTable):
        make_group(["e", "a"], [[0, 1], [1, 1]])
    with pytest.raises(InvalidGroupTable):
        make_group(["e", "a"], [[0, 1]])
    with pytest.raises(InvalidGroupTable):
        standard_group("D4")


@pytest.mark.parametrize(
    "exponents,expected",
    [
        ([rational(1, 2), rational(1, 2)], rational(1)),
        ([rational(1, 3), rational(2, 3)], rational(1)),
        ([rational(0), rational(0)], rational(0)),
        ([rational(1, 4), rational(1, 4), rational(1, 2)], rational(1)),
    ],
)
def test_age(exponents, expected):
    assert age(exponents) == expected


def test_age_out_of_range():
    with pytest.raises(ExponentOutOfRange):
        age([rational(1)])
    with pytest.raises(ExponentOutOfRange):
        age([rational(-1, 2)])


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def test_perm_degree_shift_matches_eigenvalue_ages():
    for n in range(1, 7):
        for cycle_type in partitions(n):
            for d in range(1, 4):
                # a k-cycle has eigenvalue exponents j/k, j = 0..k-1, each with multiplicity d
                exponents = [rational(j, k) for k in cycle_type for j in range(k) for _ in range(d)]
                assert perm_degree_shift(cycle_type, d, n) == age(exponents)


def test_perm_degree_shift_examples():
    assert perm_degree_shift([2], 2) == rational(1)
    assert perm_degree_shift([1, 1, 1], 2) == rational(0)
    assert perm_degree_shift([3], 2) == rational(2)
    with pytest.raises(InvalidPartition):
        perm_degree_shift([2, 1], 2, n=4)
    with pytest.raises(InvalidPartition):
        perm_degree_shift([2], 0)


def test_epsilon_sign():
    assert epsilon_sign(rational(0), rational(0), rational(0)) == rational(0)
    assert epsilon_sign(rational(1), rational(1), rational(0)) == rational(1)
    assert epsilon_sign(rational(1), rational(0), rational(1)) == rational(0)


def random_iota(group, rng, integer=False):
    representatives = sorted(set(class_map(group).values()))
    assignments = {}
    for representative in representatives:
        if representative == group.identity:
            continue
        value = rational(rng.randint(0, 8)) if integer else rational(rng.randint(0, 12), rng.randint(1, 6))
        assignments[representative] = value
    return iota_table(group, assignments)


def test_sign_cocycle_identity(group, rng):
    for _ in range(500):
        iota = random_iota(group, rng)
        epsilon = epsilon_table(group, iota)
        for h1, h2, h3 in product(range(group.order), repeat=3):
            h12, h23 = group.multiply(h1, h2), group.multiply(h2, h3)
            assert epsilon[(h1, h2)] + epsilon[(h12, h3)] == epsilon[(h1, h23)] + epsilon[(h2, h3)]


def whole(q):
    assert q.denominator == 1
    return int(q.numerator)


def test_qinwang_conjugation_identity(group, rng):
    classes = class_map(group)
    for _ in range(50):
        iota = random_iota(group, rng, integer=True)
        epsilon = epsilon_table(group, iota)
        for h1, h2 in product(range(group.order), repeat=2):
            h12 = group.multiply(h1, h2)
            lhs = i_pow(whole(iota[classes[h1]])) * i_pow(whole(iota[classes[h2]]))
            # (-1)^epsilon = i^(2 epsilon)
            rhs = i_pow(whole(iota[classes[h12]])) * i_pow(whole(2 * epsilon[(h1, h2)]))
            assert lhs == rhs


def test_iota_must_be_constant_on_classes():
    s3 = standard_group("S3")
    transpositions = [a for a in range(s3.order) if s3.multiply(a, a) == s3.identity and a != s3.identity]
    with pytest.raises(SectorMismatch):
        iota_table(s3, {transpositions[0]: rational(1), transpositions[1]: rational(2)})
    with pytest.raises(SectorMismatch):
        iota_table(s3, {transpositions[0]: rational(1)})


def test_sector_components_reassemble():
    algebra, group, iota = transposition_algebra()
    sectors = sector_algebra(algebra, group, iota)
    assert sectors.total().products == algebra.products
    assert len(sectors.components) == 4


def test_signed_product_negates_the_transposition_square():
    algebra, group, iota = transposition_algebra()
    signed = signed_product(sector_algebra(algebra, group, iota)).algebra
    assert signed.product(1, 1) == (ZERO, ZERO, -ONE)
    assert signed.product(0, 1) == algebra.product(0, 1)


def test_even_epsilon_leaves_components_unchanged():
    algebra, group, iota = transposition_algebra(iota_t=2)
    signed = signed_product(sector_algebra(algebra, group, iota)).algebra
    assert signed.products == algebra.products


def test_untwisted_algebra_is_unchanged():
    algebra, _, _ = transposition_algebra()
    trivial = make_group(["e"], [[0]])
    untwisted = algebra_from_products(
        [BasisElement(e.name, e.degree) for e in algebra.basis], 0, None, algebra.products
    )
    signed = signed_product(sector_algebra(untwisted, trivial, iota_table(trivial, {})))
    assert signed.algebra.products == untwisted.products


def test_qinwang_map_scalars():
    algebra, group, iota = transposition_algebra()
    sectors = sector_algebra(algebra, group, iota)
    assert qinwang_map(sectors).scalars == (ONE, I, ONE)

    algebra, group, iota = transposition_algebra(iota_t=2)
    assert qinwang_map(sector_algebra(algebra, group, iota)).scalars == (ONE, -ONE, ONE)


def test_qinwang_map_intertwines_signed_and_original():
    algebra, group, iota = transposition_algebra()
    sectors = sector_algebra(algebra, group, iota)
    report = verify_map(signed_product(sectors).algebra, algebra, qinwang_map(sectors))
    assert report.ok


def test_qinwang_map_on_the_symmetric_product(hilb2):
    orbifold = hilb2.counterpart
    algebra = classical_structure(orbifold)
    sectors = sector_algebra(algebra, orbifold.group, orbifold.iota)
    assert verify_map(signed_product(sectors).algebra, algebra, qinwang_map(sectors)).ok
    # the unsigned product is not intertwined by the same map
    assert not verify_map(algebra, algebra, qinwang_map(sectors)).ok


def test_half_integer_iota():
    algebra, group, iota = transposition_algebra()
    iota = iota_table(group, {1: rational(1, 2)})
    sectors = sector_algebra(algebra, group, iota)
    with pytest.raises(NonIntegerSignExponent):
        signed_product(sectors)
    with pytest.raises(NonIntegerIota):
        qinwang_map(sectors)


def test_hermitian_gram_identity_involution():
    pairing = PairingMatrix.from_rows([[gauss(2), ONE], [ONE, gauss(3)]])
    gram = hermitian_gram(pairing, (0, 1))
    assert gram.rows == pairing.rows
    assert is_positive_definite(gram)


def test_hermitian_gram_on_the_z3_sectors(c2_zgamma):
    c = gauss(rational(1, 3))
    gram = hermitian_gram(c2_zgamma.pairing, c2_zgamma.involution, c2_zgamma.basis, c2_zgamma.group)
    assert gram.rows == ((c, ZERO), (ZERO, c))
    assert is_positive_definite(gram)


def test_hermitian_gram_rejects_bad_involutions():
    pairing = PairingMatrix.from_rows([[ZERO, ONE], [ONE, ZERO]])
    basis = [BasisElement("a", rational(2)), BasisElement("b", rational(4))]
    with pytest.raises(SectorMismatch):
        hermitian_gram(pairing, (1, 0), basis)
    with pytest.raises(NotAnInvolution):
        hermitian_gram(PairingMatrix.from_rows([[ONE] * 3] * 3), (1, 2, 0))


def test_hermitian_gram_needs_the_inverse_sector():
    z3 = standard_group("Z3")
    pairing = PairingMatrix.from_rows([[ONE, ZERO], [ZERO, ONE]])
    basis = [BasisElement("a", rational(2), "g"), BasisElement("b", rational(2), "g2")]
    with pytest.raises(SectorMismatch):
        hermitian_gram(pairing, (0, 1), basis, z3)


@pytest.mark.parametrize(
    "rows,expected",
    [
        (((ONE, ZERO), (ZERO, ONE)), True),
        (((ZERO, ONE), (ONE, ZERO)), False),
        (((gauss(2), I), (-I, gauss(2))), True),
        (((ONE, gauss(2)), (gauss(2), ONE)), False),
    ],
)
def test_is_positive_definite(rows, expected):
    assert is_positive_definite(HermitianMatrix(rows)) is expected


@pytest.mark.parametrize(
    "rows",
    [
        ((ONE, I), (I, ONE)),
        ((I, ZERO), (ZERO, ONE)),
        ((ONE, gauss(2)), (ZERO, ONE)),
    ],
)
def test_positive_definiteness_needs_a_hermitian_matrix(rows):
    with pytest.raises(NotHermitian):
        is_positive_definite(HermitianMatrix(rows))
