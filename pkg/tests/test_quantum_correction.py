import pytest

from qcring.core.errors import BasisMismatch, DegenerateRays, PoleAtOne, QValueRejected, SchemaViolation
from qcring.core.scalars import ONE, ZERO, gauss, rational
from qcring.models.algebra import BasisElement, TripleTensor
from qcring.models.series import ExtremalRaySet, GWSeries, QPoint, SeriesTail, SeriesTerm
from qcring.services.bundles import classical_structure, corrected_structure, corrected_tensor, qc_tensor
from qcring.services.fixtures import load_fixture
from qcring.services.quantum_correction import (
    check_q_value,
    corrected_triples,
    evaluate_series,
    evaluation_point,
    qc_triple_tensor,
    validate_series,
)

RAY = ExtremalRaySet(("C",), nondegenerate=True)
AT_MINUS_ONE = QPoint((-ONE,))


def power(z, n):
    result = ONE
    for _ in range(n):
        result = result * z
    return result


def test_check_q_value():
    assert check_q_value("-1") == -ONE
    with pytest.raises(QValueRejected):
        check_q_value("1/2")


def test_evaluation_point():
    assert evaluation_point(ExtremalRaySet(("C1", "C2"), True)).values == (-ONE, -ONE)


def test_empty_series_is_zero():
    assert evaluate_series(GWSeries((0, 0, 0)), AT_MINUS_ONE) == ZERO


def test_single_term():
    series = GWSeries((0, 0, 0), terms=(SeriesTerm((3,), gauss(5)),))
    assert evaluate_series(series, AT_MINUS_ONE) == gauss(-5)


def test_tail_of_the_genus_two_fiber():
    g = 2
    series = GWSeries((0, 0, 0), tails=(SeriesTail(0, 1, gauss(2 * (g - 1))),))
    assert evaluate_series(series, AT_MINUS_ONE) == gauss(1 - g)


def test_tail_closed_form_against_partial_sums(rng):
    for _ in range(200):
        c = gauss(rational(rng.randint(-50, 50), rng.randint(1, 10)), rng.randint(-5, 5))
        start = rng.randint(1, 5)
        series = GWSeries((0, 0, 0), tails=(SeriesTail(0, start, c),))
        assert evaluate_series(series, AT_MINUS_ONE) == c * power(-ONE, start) / gauss(2)

        q = gauss(rational(rng.randint(-9, 9), 10), rational(rng.randint(-9, 9), 10))
        partial = ZERO
        for d in range(start, 51):
            partial = partial + c * power(q, d)
        remainder = c * power(q, 51) / (ONE - q)
        assert evaluate_series(series, QPoint((q,))) == partial + remainder


def test_tail_has_a_pole_at_one(rng):
    for _ in range(20):
        tail = SeriesTail(0, rng.randint(1, 5), gauss(rng.randint(1, 9)))
        with pytest.raises(PoleAtOne) as info:
            evaluate_series(GWSeries((0, 1, 2), tails=(tail,)), QPoint((ONE,)), RAY)
        assert info.value.ray == "C"
        assert info.value.triple == (0, 1, 2)


def test_terms_alone_are_fine_at_one():
    series = GWSeries((0, 0, 0), terms=(SeriesTerm((1,), gauss(2)), SeriesTerm((4,), gauss(3))))
    assert evaluate_series(series, QPoint((ONE,))) == gauss(5)


def test_overlapping_tail_is_rejected():
    series = GWSeries((0, 0, 0), terms=(SeriesTerm((2,), ONE),), tails=(SeriesTail(0, 1, ONE),))
    with pytest.raises(SchemaViolation):
        validate_series(series, RAY, 1)


def test_degenerate_rays():
    basis = [BasisElement("D", rational(2))]
    series = [GWSeries((0, 0, 0), tails=(SeriesTail(0, 1, ONE),))]
    with pytest.raises(DegenerateRays):
        qc_triple_tensor(series, ExtremalRaySet(("C",), nondegenerate=False), basis)


def test_series_on_the_same_triple_add_up():
    basis = [BasisElement("D", rational(2))]
    series = [
        GWSeries((0, 0, 0), terms=(SeriesTerm((1,), gauss(3)),)),
        GWSeries((0, 0, 0), terms=(SeriesTerm((2,), gauss(4)),)),
    ]
    assert qc_triple_tensor(series, RAY, basis).get(0, 0, 0) == gauss(1)


@pytest.mark.parametrize("g", [2, 3, 10])
def test_local_cy_correction(g):
    bundle = load_fixture("local_cy_genus_g", {"g": str(g)})
    beta = bundle.index("beta'")
    qc = qc_tensor(bundle)
    assert list(qc.items()) == [((beta, beta, beta), gauss(-8 * (1 - g)))]
    assert corrected_tensor(bundle).get(beta, beta, beta) == ZERO
    orbifold = classical_structure(bundle.counterpart)
    assert corrected_structure(bundle).value(beta, beta, beta) == orbifold.value(1, 1, 1)


def test_hilb2_correction_cancels(hilb2):
    e1, eh = hilb2.index("1bar"), hilb2.index("hbar")
    c1 = hilb2.parameters["<C1,h>"]
    assert qc_tensor(hilb2).get(e1, e1, eh) == gauss(4) * c1
    assert hilb2.triples.get(e1, e1, eh) == gauss(-4) * c1
    assert corrected_tensor(hilb2).get(e1, e1, eh) == ZERO


def test_zero_correction_leaves_the_ring_alone(mukai):
    assert qc_tensor(mukai).is_zero()
    assert corrected_triples(mukai.triples, TripleTensor.zero(mukai.dim, mukai.top_degree)) == mukai.triples
    assert corrected_structure(mukai).products == classical_structure(mukai).products


def test_flop_corrections_agree(atiyah):
    d1 = atiyah.index("D1")
    half = gauss(rational(1, 2))
    assert qc_tensor(atiyah).get(d1, d1, d1) == -half
    assert qc_tensor(atiyah.counterpart).get(d1, d1, d1) == half
    assert corrected_structure(atiyah).tensor.entries == corrected_structure(atiyah.counterpart).tensor.entries


def random_scalar(rng):
    return gauss(rational(rng.randint(-20, 20), rng.randint(1, 6)), rational(rng.randint(-20, 20), rng.randint(1, 6)))


def random_tensor(rng, size):
    items = {}
    for _ in range(rng.randint(0, 6)):
        key = tuple(sorted(rng.randint(0, size - 1) for _ in range(3)))
        items[key] = random_scalar(rng)
    return TripleTensor.build(size, items.items())


def test_corrected_triples_add_entrywise(rng):
    for _ in range(50):
        size = rng.randint(1, 4)
        classical, qc = random_tensor(rng, size), random_tensor(rng, size)
        corrected = corrected_triples(classical, qc)
        for a in range(size):
            for b in range(size):
                for c in range(size):
                    assert corrected.get(a, b, c) == classical.get(a, b, c) + qc.get(a, b, c)
        assert corrected_triples(TripleTensor.zero(size), qc) == qc


def test_corrected_triples_need_a_common_basis():
    with pytest.raises(BasisMismatch):
        corrected_triples(TripleTensor.build(2, [((0, 0, 1), ONE)]), TripleTensor.build(3, [((0, 1, 2), ONE)]))
    with pytest.raises(BasisMismatch):
        corrected_triples(TripleTensor.zero(2, rational(6)), TripleTensor.zero(2, rational(4)))


def test_evaluate_series_is_linear_in_coefficients(rng):
    rays = ExtremalRaySet(("C1", "C2"), nondegenerate=True)
    degrees = [(1, 0), (0, 2), (2, 3), (1, 1)]
    for _ in range(100):
        q = QPoint(tuple(random_scalar(rng) for _ in range(2)))
        if ONE in q.values:
            continue
        first = [random_scalar(rng) for _ in range(len(degrees) + 2)]
        second = [random_scalar(rng) for _ in range(len(degrees) + 2)]
        x, y = random_scalar(rng), random_scalar(rng)

        def series(values):
            terms = tuple(SeriesTerm(d, v) for d, v in zip(degrees, values))
            tails = (SeriesTail(0, 3, values[-2]), SeriesTail(1, 4, values[-1]))
            return GWSeries((0, 0, 0), terms=terms, tails=tails)

        combined = series([x * u + y * v for u, v in zip(first, second)])
        expected = x * evaluate_series(series(first), q, rays) + y * evaluate_series(series(second), q, rays)
        assert evaluate_series(combined, q, rays) == expected
