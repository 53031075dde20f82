from itertools import permutations

import pytest

from qcring.core.errors import DegeneratePairing, GradingViolation, NonRealEntry, OddDegreeUnsupported
from qcring.core.scalars import I, ONE, ZERO, gauss, rational
from qcring.models.algebra import BasisElement, CubicForm, PairingMatrix, TripleTensor
from qcring.services.bundles import classical_structure, corrected_structure
from qcring.services.fixtures import load_fixture
from qcring.services.graded_algebra import (
    algebra_from_products,
    basis_vector,
    build_algebra,
    check_associativity,
    check_structure,
    cubic_form,
    cubic_form_algebra,
    multiply,
    pairing_signature,
    pairing_value,
    restrict_pairing,
)


def unit_algebra():
    basis = [BasisElement("1", rational(0))]
    return build_algebra(basis, PairingMatrix.from_rows([[ONE]]), TripleTensor.build(1, [((0, 0, 0), ONE)]))


def truncated_polynomial_algebra(top: int):
    """Q[h]/h^(top+1) with <h^a, h^b, h^c> = 1 when a+b+c = top."""
    basis = [BasisElement(f"h{a}", rational(2 * a)) for a in range(top + 1)]
    rows = [[ONE if a + b == top else ZERO for b in range(top + 1)] for a in range(top + 1)]
    items = [
        ((a, b, top - a - b), ONE)
        for a in range(top + 1)
        for b in range(top + 1 - a)
    ]
    return build_algebra(basis, PairingMatrix.from_rows(rows), TripleTensor.build(top + 1, items, rational(2 * top)), unit=0)


def test_unit_algebra():
    algebra = unit_algebra()
    assert algebra.product(0, 0) == (ONE,)
    assert check_structure(algebra) == []
    assert check_associativity(algebra) == []


def test_truncated_polynomial_products():
    algebra = truncated_polynomial_algebra(4)
    h = basis_vector(algebra, 1)
    assert multiply(algebra, h, h) == basis_vector(algebra, 2)
    assert multiply(algebra, basis_vector(algebra, 2), basis_vector(algebra, 3)) == algebra.zero_vector()
    assert check_structure(algebra) == []
    assert check_associativity(algebra) == []


def test_products_reproduce_triples():
    algebra = truncated_polynomial_algebra(3)
    n = algebra.dim
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert pairing_value(algebra.pairing, algebra.product(a, b), basis_vector(algebra, c)) == algebra.triples.get(a, b, c)


def test_zero_pairing_row_is_degenerate():
    basis = [BasisElement("1", rational(0)), BasisElement("x", rational(2))]
    pairing = PairingMatrix.from_rows([[ONE, ZERO], [ZERO, ZERO]])
    with pytest.raises(DegeneratePairing):
        build_algebra(basis, pairing, TripleTensor.build(2, [((0, 0, 0), ONE)]))


def test_triples_off_the_top_degree():
    basis = [BasisElement("1", rational(0)), BasisElement("x", rational(2))]
    pairing = PairingMatrix.from_rows([[ZERO, ONE], [ONE, ZERO]])
    triples = TripleTensor.build(2, [((0, 0, 1), ONE), ((0, 1, 1), ONE)], rational(2))
    with pytest.raises(GradingViolation):
        build_algebra(basis, pairing, triples)


@pytest.mark.parametrize(
    "items",
    [
        [((0, 1, 1), ONE), ((1, 0, 1), gauss(2))],
        [((0, 1, 1), ZERO), ((1, 0, 1), gauss(2))],
        [((1, 1, 0), gauss(2)), ((0, 1, 1), ZERO)],
    ],
)
def test_conflicting_triple_values(items):
    with pytest.raises(GradingViolation):
        TripleTensor.build(2, items)


def test_repeated_zero_entries_are_consistent():
    tensor = TripleTensor.build(2, [((0, 1, 1), ZERO), ((1, 1, 0), ZERO), ((0, 0, 0), ONE)])
    assert tensor.entries == {(0, 0, 0): ONE}


def test_triple_tensor_symmetry(rng):
    for _ in range(50):
        size = rng.randint(1, 4)
        items = {}
        for _ in range(rng.randint(1, 6)):
            triple = tuple(rng.randrange(size) for _ in range(3))
            items[tuple(sorted(triple))] = gauss(rng.randint(-5, 5), rng.randint(-5, 5))
        tensor = TripleTensor.build(size, items.items())
        for triple in items:
            for perm in permutations(triple):
                assert tensor.get(*perm) == tensor.get(*triple)


def test_corrupted_entry_gives_one_violation():
    algebra = truncated_polynomial_algebra(2)
    products = dict(algebra.products)
    products[(1, 2)] = (ZERO, ZERO, gauss(5))
    corrupted = algebra_from_products(algebra.basis, None, algebra.pairing, products)
    violations = [v for v in check_structure(corrupted) if v.kind == "commutativity"]
    assert len(violations) == 1
    assert violations[0].indices == (1, 2, 2)


def test_unit_law_violation():
    algebra = truncated_polynomial_algebra(2)
    products = dict(algebra.products)
    products[(0, 1)] = (ZERO, gauss(2), ZERO)
    broken = algebra_from_products(algebra.basis, 0, algebra.pairing, products)
    kinds = {v.kind for v in check_structure(broken)}
    assert "unit" in kinds


def test_random_structure_constants_are_not_associative(rng):
    basis = [BasisElement(f"e{a}", rational(0)) for a in range(3)]
    products = {
        (a, b): tuple(gauss(rng.randint(-3, 3)) for _ in range(3))
        for a in range(3)
        for b in range(3)
    }
    products[(0, 1)] = (ONE, ONE, ZERO)
    products[(1, 0)] = (ONE, ONE, ZERO)
    products[(1, 1)] = (ZERO, ZERO, ONE)
    products[(0, 0)] = (ZERO, ZERO, ZERO)
    algebra = algebra_from_products(basis, None, None, products)
    # (e0 e0) e1 = 0 while e0 (e0 e1) = e0 e0 + e0 e1 = e0 + e1
    assert (0, 0, 1) in [v.indices for v in check_associativity(algebra)]


def test_checks_are_deterministic(hilb2):
    algebra = classical_structure(hilb2.counterpart)
    assert check_structure(algebra) == check_structure(algebra)
    assert check_associativity(algebra) == check_associativity(algebra)


def test_cubic_forms_of_the_local_cy_fixture(local_cy):
    resolution = classical_structure(local_cy)
    alpha, beta = local_cy.index("alpha'"), local_cy.index("beta'")
    assert resolution.value(alpha, beta, beta) == gauss(-2)
    assert resolution.value(beta, beta, beta) == gauss(-8)

    orbifold = classical_structure(local_cy.counterpart)
    assert orbifold.value(0, 1, 1) == gauss(rational(1, 2))
    assert orbifold.value(0, 0, 0) == ZERO
    assert orbifold.value(1, 1, 1) == ZERO


def test_cubic_form_rejects_other_degrees():
    basis = [BasisElement("1", rational(0)), BasisElement("x", rational(2))]
    tensor = TripleTensor.build(2, [((1, 1, 1), ONE)])
    with pytest.raises(GradingViolation):
        cubic_form(basis, tensor)
    assert cubic_form(basis, tensor, []).size == 0
    assert cubic_form(basis, tensor, [1]).value(0, 0, 0) == ONE


def test_corrected_cubic_form_algebra_is_associative(local_cy):
    algebra = cubic_form_algebra(corrected_structure(local_cy))
    assert check_structure(algebra) == []
    assert check_associativity(algebra) == []


@pytest.mark.parametrize(
    "rows,expected",
    [
        ([[1, 0], [0, 1]], (2, 0, 0)),
        ([[0, 1], [1, 0]], (1, 1, 0)),
        ([[0, 0, 0], [0, 0, 0], [0, 0, 0]], (0, 0, 3)),
        ([[-2, 1], [1, -2]], (0, 2, 0)),
        ([[1, 1], [1, 1]], (1, 0, 1)),
    ],
)
def test_pairing_signature(rows, expected):
    pairing = PairingMatrix.from_rows([[gauss(x) for x in row] for row in rows])
    assert pairing_signature(pairing) == expected


def test_signature_is_invariant_under_permutation(rng):
    for _ in range(20):
        n = rng.randint(2, 4)
        values = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                values[a][b] = values[b][a] = rng.randint(-3, 3)
        pairing = PairingMatrix.from_rows([[gauss(x) for x in row] for row in values])
        order = list(range(n))
        rng.shuffle(order)
        assert pairing_signature(restrict_pairing(pairing, order)) == pairing_signature(pairing)
        assert sum(pairing_signature(pairing)) == n


def test_signature_rejects_complex_entries():
    with pytest.raises(NonRealEntry):
        pairing_signature(PairingMatrix.from_rows([[I]]))


def test_odd_degree_classes_are_rejected():
    basis = [BasisElement("1", rational(0)), BasisElement("x", rational(1))]
    pairing = PairingMatrix.from_rows([[ONE, ZERO], [ZERO, ONE]])
    with pytest.raises(OddDegreeUnsupported):
        build_algebra(basis, pairing, TripleTensor.build(2, [((0, 1, 1), ONE)]))


@pytest.mark.parametrize("name", ["hilb2_surface", "atiyah_flop", "c2_zgamma_pairing"])
def test_fixture_rings_pair_products_back_to_triples(name):
    bundle = load_fixture(name)
    for side in (bundle, bundle.counterpart):
        for structure in (classical_structure(side), corrected_structure(side)):
            algebra = cubic_form_algebra(structure) if isinstance(structure, CubicForm) else structure
            n = algebra.dim
            for a in range(n):
                for b in range(n):
                    product_ab = algebra.product(a, b)
                    for c in range(n):
                        paired = pairing_value(algebra.pairing, product_ab, basis_vector(algebra, c))
                        assert paired == algebra.triples.get(a, b, c)
