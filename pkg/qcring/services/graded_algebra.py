"""Graded algebras presented by a Poincaré pairing and a triple-intersection tensor."""

import logging
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from qcring.core.errors import (
    BasisMismatch,
    DegeneratePairing,
    GradingViolation,
    NonRealEntry,
    OddDegreeUnsupported,
)
from qcring.core.scalars import ONE, ZERO, GaussRational, format_scalar, rational
from qcring.models.algebra import (
    BasisElement,
    CubicForm,
    GradedAlgebra,
    PairingMatrix,
    TripleTensor,
    Vector,
    Violation,
)

logger = logging.getLogger(__name__)


def validate_basis(basis: Sequence[BasisElement]) -> None:
    seen = set()
    for element in basis:
        if element.name in seen:
            raise GradingViolation(f"duplicate basis name {element.name!r}")
        seen.add(element.name)
        if element.degree < 0:
            raise GradingViolation(f"{element.name} has negative degree")


def validate_triples(basis: Sequence[BasisElement], triples: TripleTensor) -> None:
    if triples.size != len(basis):
        raise BasisMismatch(f"tensor has dimension {triples.size}, basis has {len(basis)}")
    for (i, j, k), _ in triples.items():
        if any(basis[n].is_odd() for n in (i, j, k)):
            names = ", ".join(basis[n].name for n in (i, j, k))
            raise OddDegreeUnsupported(f"product involving odd classes ({names})")
        if triples.top_degree is not None:
            total = basis[i].degree + basis[j].degree + basis[k].degree
            if total != triples.top_degree:
                raise GradingViolation(
                    f"<{basis[i].name},{basis[j].name},{basis[k].name}> has degree {total}, "
                    f"top degree is {triples.top_degree}"
                )


def validate_pairing(basis: Sequence[BasisElement], pairing: PairingMatrix, top_degree=None) -> None:
    if pairing.size != len(basis):
        raise BasisMismatch(f"pairing has dimension {pairing.size}, basis has {len(basis)}")
    if not pairing.is_symmetric():
        raise DegeneratePairing("pairing must be symmetric")
    if top_degree is None:
        return
    for i, j in product(range(pairing.size), repeat=2):
        if pairing.entry(i, j) and basis[i].degree + basis[j].degree != top_degree:
            raise GradingViolation(f"<{basis[i].name},{basis[j].name}> pairs degrees off the top degree")


def inverse_pairing(pairing: PairingMatrix) -> List[List[GaussRational]]:
    matrix = pairing.to_domain_matrix()
    if pairing.size == 0:
        return []
    if matrix.rank() < pairing.size:
        raise DegeneratePairing(f"pairing has rank {matrix.rank()} < {pairing.size}")
    return matrix.inv().to_list()


def default_unit(basis: Sequence[BasisElement]) -> Optional[int]:
    for position, element in enumerate(basis):
        if element.degree == 0 and element.sector is None:
            return position
    for position, element in enumerate(basis):
        if element.degree == 0:
            return position
    return None


def build_algebra(
    basis: Sequence[BasisElement],
    pairing: PairingMatrix,
    triples: TripleTensor,
    unit: Optional[int] = None,
) -> GradedAlgebra:
    """Solve <a∪b, c> = <a,b,c> for the structure constants."""
    basis = tuple(basis)
    validate_basis(basis)
    validate_triples(basis, triples)
    validate_pairing(basis, pairing, triples.top_degree)
    if unit is None:
        unit = default_unit(basis)
    elif basis[unit].degree != 0:
        raise GradingViolation(f"unit {basis[unit].name} must have degree 0")

    inverse = inverse_pairing(pairing)
    n = len(basis)
    rows: Dict[Tuple[int, int], Dict[int, GaussRational]] = {}
    for (i, j, k), value in triples.full_items():
        rows.setdefault((i, j), {})[k] = value

    products: Dict[Tuple[int, int], Vector] = {}
    for pair, column in sorted(rows.items()):
        vector = tuple(
            sum((inverse[m][k] * value for k, value in column.items()), ZERO) for m in range(n)
        )
        if any(vector):
            products[pair] = vector
    logger.debug("derived %d nonzero products on a %d-dimensional basis", len(products), n)
    return GradedAlgebra(basis, unit, pairing, triples, products)


def algebra_from_products(
    basis: Sequence[BasisElement],
    unit: Optional[int],
    pairing: Optional[PairingMatrix],
    products: Dict[Tuple[int, int], Vector],
) -> GradedAlgebra:
    basis = tuple(basis)
    validate_basis(basis)
    cleaned = {pair: tuple(vector) for pair, vector in sorted(products.items()) if any(vector)}
    for vector in cleaned.values():
        if len(vector) != len(basis):
            raise BasisMismatch("product vector length differs from the basis dimension")
    return GradedAlgebra(basis, unit, pairing, None, cleaned)


def basis_vector(algebra: GradedAlgebra, i: int) -> Vector:
    return tuple(ONE if position == i else ZERO for position in range(algebra.dim))


def multiply(algebra: GradedAlgebra, x: Vector, y: Vector) -> Vector:
    result = list(algebra.zero_vector())
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            coefficient = a * b
            for k, value in enumerate(algebra.product(i, j)):
                if value:
                    result[k] = result[k] + coefficient * value
    return tuple(result)


def pairing_value(pairing: PairingMatrix, x: Vector, y: Vector) -> GaussRational:
    total = ZERO
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if b:
                total = total + a * b * pairing.entry(i, j)
    return total


def check_structure(algebra: GradedAlgebra) -> List[Violation]:
    """Degree additivity, commutativity and the unit law."""
    violations: List[Violation] = []
    n = algebra.dim
    for (i, j), vector in sorted(algebra.products.items()):
        for k, value in enumerate(vector):
            if value and algebra.degree(k) != algebra.degree(i) + algebra.degree(j):
                violations.append(Violation("degree", (i, j, k), _describe(algebra, (i, j, k))))

    for i in range(n):
        for j in range(i + 1, n):
            left, right = algebra.product(i, j), algebra.product(j, i)
            for k in range(n):
                if left[k] != right[k]:
                    detail = f"{format_scalar(left[k])} != {format_scalar(right[k])}"
                    violations.append(Violation("commutativity", (i, j, k), detail))

    if algebra.unit is not None:
        u = algebra.unit
        for a in range(n):
            image = algebra.product(u, a)
            for k in range(n):
                expected = ONE if k == a else ZERO
                if image[k] != expected:
                    violations.append(Violation("unit", (u, a, k), f"coefficient {format_scalar(image[k])}"))
    return violations


def check_associativity(algebra: GradedAlgebra) -> List[Violation]:
    violations: List[Violation] = []
    n = algebra.dim
    for a, b, c in product(range(n), repeat=3):
        left = _times_basis(algebra, algebra.product(a, b), c, right=True)
        right = _times_basis(algebra, algebra.product(b, c), a, right=False)
        if left != right:
            k = next(k for k in range(n) if left[k] != right[k])
            detail = f"component {algebra.basis[k].name}: {format_scalar(left[k])} != {format_scalar(right[k])}"
            violations.append(Violation("associativity", (a, b, c), detail))
    return violations


def _times_basis(algebra: GradedAlgebra, x: Vector, c: int, right: bool) -> Vector:
    result = list(algebra.zero_vector())
    for k, coefficient in enumerate(x):
        if not coefficient:
            continue
        partial = algebra.product(k, c) if right else algebra.product(c, k)
        for m, value in enumerate(partial):
            if value:
                result[m] = result[m] + coefficient * value
    return tuple(result)


def _describe(algebra: GradedAlgebra, indices: Sequence[int]) -> str:
    return ",".join(algebra.basis[i].name for i in indices)


def cubic_form(basis: Sequence[BasisElement], triples: TripleTensor, indices: Optional[Sequence[int]] = None) -> CubicForm:
    """Restrict a triple tensor to a sub-basis of degree-2 classes."""
    indices = list(range(len(basis))) if indices is None else list(indices)
    for i in indices:
        if basis[i].degree != 2:
            raise GradingViolation(f"{basis[i].name} has degree {basis[i].degree}, expected 2")
    position = {old: new for new, old in enumerate(indices)}
    items = [
        ((position[i], position[j], position[k]), value)
        for (i, j, k), value in triples.items()
        if i in position and j in position and k in position
    ]
    tensor = TripleTensor.build(len(indices), items, triples.top_degree)
    return CubicForm(tuple(basis[i].name for i in indices), tensor)


def cubic_form_algebra(form: CubicForm) -> GradedAlgebra:
    """Complete a cubic form on H^2 to a Frobenius algebra with a formal top class."""
    n = form.size
    two, four, six = rational(2), rational(4), rational(6)
    basis = (
        [BasisElement("1", rational(0))]
        + [BasisElement(name, two) for name in form.names]
        + [BasisElement(f"{name}^", four) for name in form.names]
        + [BasisElement("top", six)]
    )
    size = len(basis)
    top = size - 1
    rows = [[ZERO] * size for _ in range(size)]
    rows[0][top] = rows[top][0] = ONE
    for i in range(n):
        rows[1 + i][1 + n + i] = rows[1 + n + i][1 + i] = ONE
    pairing = PairingMatrix.from_rows(rows)

    items = [((0, a, b), rows[a][b]) for a in range(size) for b in range(a, size) if rows[a][b]]
    items += [((1 + i, 1 + j, 1 + k), value) for (i, j, k), value in form.tensor.items()]
    triples = TripleTensor.build(size, items, six)
    return build_algebra(basis, pairing, triples, unit=0)


def pairing_signature(pairing: PairingMatrix) -> Tuple[int, int, int]:
    """Inertia (positive, negative, zero) of a real symmetric pairing.

    The characteristic polynomial of a real symmetric matrix has only real
    roots, so Descartes' sign rule counts the positive eigenvalues exactly.
    """
    n = pairing.size
    if n == 0:
        return (0, 0, 0)
    for row in pairing.rows:
        for value in row:
            if value.y:
                raise NonRealEntry(f"pairing entry {format_scalar(value)} is not real")
    if not pairing.is_symmetric():
        raise NonRealEntry("pairing must be symmetric")
    real = DomainMatrix([[value.x for value in row] for row in pairing.rows], (n, n), QQ)
    coefficients = real.charpoly()

    zero = 0
    while zero < n and not coefficients[n - zero]:
        zero += 1
    positive = _sign_changes(coefficients)
    negative = n - zero - positive
    return (positive, negative, zero)


def _sign_changes(coefficients) -> int:
    signs = [c > 0 for c in coefficients if c]
    return sum(1 for before, after in zip(signs, signs[1:]) if before != after)


def restrict_pairing(pairing: PairingMatrix, indices: Sequence[int]) -> PairingMatrix:
    return PairingMatrix.from_rows([[pairing.entry(i, j) for j in indices] for i in indices])
