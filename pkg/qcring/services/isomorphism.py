"""Ring isomorphisms: exact verification of candidate maps and a diagonal solver over Q(i)."""

import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.domains import QQ, QQ_I, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from qcring.core.config import settings
from qcring.core.errors import ShapeMismatch, SingularMap
from qcring.core.scalars import ONE, ZERO, GaussRational, format_scalar, from_sympy, to_complex, to_sympy
from qcring.models.algebra import CubicForm, GradedAlgebra, Vector
from qcring.models.maps import (
    Constraint,
    DiagonalMap,
    IsoReport,
    LinearMap,
    NumericWitness,
    Obstruction,
    Verdict,
)
from qcring.services.bundles import corrected_structure
from qcring.services.graded_algebra import basis_vector, multiply, pairing_value

logger = logging.getLogger(__name__)

Structure = Union[GradedAlgebra, CubicForm]

_CUBIC_DEGREE = QQ(2)

IntMatrix = List[List[int]]


def _names(structure: Structure) -> List[str]:
    return list(structure.names) if isinstance(structure, CubicForm) else structure.names()


def _degrees(structure: Structure) -> Tuple:
    if isinstance(structure, CubicForm):
        return tuple(_CUBIC_DEGREE for _ in structure.names)
    return tuple(element.degree for element in structure.basis)


def _check_kinds(source: Structure, target: Structure) -> None:
    if isinstance(source, CubicForm) != isinstance(target, CubicForm):
        raise ShapeMismatch("cannot compare a cubic form with an algebra")
    if len(_names(source)) != len(_names(target)):
        raise ShapeMismatch(f"dimensions differ: {len(_names(source))} vs {len(_names(target))}")


def _as_linear(source: Structure, target: Structure, m: Union[LinearMap, DiagonalMap]) -> LinearMap:
    if isinstance(m, DiagonalMap):
        if m.size != len(_names(source)):
            raise ShapeMismatch("diagonal map has the wrong number of scalars")
        if _degrees(source) != _degrees(target):
            raise ShapeMismatch("a diagonal map needs matching degrees position by position")
        return m.as_linear(_degrees(source))
    if m.source_degrees != _degrees(source) or m.target_degrees != _degrees(target):
        raise ShapeMismatch("map degrees do not match the source and target bases")
    return m


def _apply(linear: LinearMap, vector: Vector) -> Vector:
    return tuple(
        sum((row[s] * value for s, value in enumerate(vector) if value), ZERO) for row in linear.matrix
    )


def _trilinear(form: CubicForm, x: Vector, y: Vector, z: Vector) -> GaussRational:
    total = ZERO
    for (a, b, c), value in form.tensor.full_items():
        if x[a] and y[b] and z[c]:
            total = total + value * x[a] * y[b] * z[c]
    return total


def verify_map(
    source: Structure,
    target: Structure,
    m: Union[LinearMap, DiagonalMap],
    check_pairing: bool = False,
) -> IsoReport:
    """Exact check that m is a ring map (or cubic-form isometry) from source to target."""
    _check_kinds(source, target)
    linear = _as_linear(source, target, m)
    if linear.size and not DomainMatrix([list(row) for row in linear.matrix], (linear.size, linear.size), QQ_I).det():
        raise SingularMap("candidate map is not invertible")

    names = _names(source)
    columns = [linear.column(a) for a in range(linear.size)]
    witness = m if isinstance(m, DiagonalMap) else None

    def refuted(triple, lhs, rhs, kind="product") -> IsoReport:
        obstruction = Obstruction(tuple(names[i] for i in triple), lhs, rhs, kind)
        logger.debug("map refuted at %s: %s != %s", obstruction.triple, format_scalar(lhs), format_scalar(rhs))
        return IsoReport(Verdict.refuted, obstruction=obstruction)

    if isinstance(source, CubicForm):
        n = source.size
        for a in range(n):
            for b in range(a, n):
                for c in range(b, n):
                    lhs = _trilinear(target, columns[a], columns[b], columns[c])
                    rhs = source.value(a, b, c)
                    if lhs != rhs:
                        return refuted((a, b, c), lhs, rhs)
        return IsoReport(Verdict.verified, witness=witness, linear_witness=linear)

    n = source.dim
    for a in range(n):
        for b in range(n):
            lhs = _apply(linear, source.product(a, b))
            rhs = multiply(target, columns[a], columns[b])
            if lhs != rhs:
                c = next(k for k in range(n) if lhs[k] != rhs[k])
                return refuted((a, b, c), lhs[c], rhs[c])

    if source.unit is not None and target.unit is not None:
        image = columns[source.unit]
        expected = basis_vector(target, target.unit)
        if image != expected:
            u = source.unit
            c = next(k for k in range(n) if image[k] != expected[k])
            return refuted((u, u, c), image[c], expected[c], kind="unit")

    if check_pairing and source.pairing is not None and target.pairing is not None:
        for a in range(n):
            for b in range(a, n):
                lhs = pairing_value(target.pairing, columns[a], columns[b])
                rhs = source.pairing.entry(a, b)
                if lhs != rhs:
                    return refuted((a, b, b), lhs, rhs, kind="pairing")

    return IsoReport(Verdict.verified, witness=witness, linear_witness=linear)


def root_in_field(z: GaussRational, k: int) -> List[GaussRational]:
    """All k-th roots of z inside Q(i), largest real part first, then largest imaginary part."""
    if k < 1:
        raise ValueError(f"root order must be positive, got {k}")
    if not z:
        return [ZERO]
    if k == 1:
        return [z]
    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(x**k - to_sympy(z), x, gaussian=True)
    roots: List[GaussRational] = []
    for factor, _ in factors:
        poly = sympy.Poly(factor, x)
        if poly.degree() != 1:
            continue
        leading, constant = poly.all_coeffs()
        root = from_sympy(-constant / leading)
        if root not in roots:
            roots.append(root)
    return sorted(roots, key=lambda r: (-r.x, -r.y))


def smith_normal_decomposition(
    matrix: Sequence[Sequence[int]], columns: Optional[int] = None
) -> Tuple[List[int], IntMatrix, IntMatrix]:
    """Return (d, U, V) with U * E * V = diag(d) over the integers.

    U and V are unimodular and nonzero entries of ``d`` are positive and come
    first, so the columns of V past the rank span the integer kernel of E.
    """
    rows = len(matrix)
    n = len(matrix[0]) if rows else (columns or 0)
    if not rows or not n:
        return [], _identity(rows), _identity(n)
    exponents = DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix], (rows, n), ZZ)
    smith, u, v = smith_normal_decomp(exponents)
    diagonal = smith.to_list()
    d = [int(diagonal[t][t]) for t in range(min(rows, n))]
    u_rows = [[int(x) for x in row] for row in u.to_list()]
    for t, value in enumerate(d):
        if value < 0:
            d[t] = -value
            u_rows[t] = [-x for x in u_rows[t]]
    return d, u_rows, [[int(x) for x in row] for row in v.to_list()]


def rank_of(diagonal: Sequence[int]) -> int:
    return sum(1 for d in diagonal if d)


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _constraints(source: Structure, target: Structure, include_pairing: bool):
    """Multiplicative constraints on the scalars, or the first zero-pattern mismatch."""
    names = _names(source)
    n = len(names)
    constraints: List[Constraint] = []

    def exponents(plus: Sequence[int], minus: Sequence[int] = ()) -> Tuple[int, ...]:
        vector = [0] * n
        for a in plus:
            vector[a] += 1
        for a in minus:
            vector[a] -= 1
        return tuple(vector)

    def mismatch(triple, lhs, rhs, kind="zero-pattern") -> Obstruction:
        return Obstruction(tuple(names[i] for i in triple), lhs, rhs, kind)

    if isinstance(source, CubicForm):
        for a in range(n):
            for b in range(a, n):
                for c in range(b, n):
                    x, y = source.value(a, b, c), target.value(a, b, c)
                    if bool(x) != bool(y):
                        return [], mismatch((a, b, c), x, y)
                    if x:
                        constraints.append(Constraint((a, b, c), exponents((a, b, c)), x / y))
        return constraints, None

    for a in range(n):
        for b in range(n):
            left, right = source.product(a, b), target.product(a, b)
            for c in range(n):
                x, y = left[c], right[c]
                if bool(x) != bool(y):
                    return [], mismatch((a, b, c), x, y)
                if x:
                    constraints.append(Constraint((a, b, c), exponents((a, b), (c,)), x / y))

    if source.unit != target.unit:
        u = source.unit if source.unit is not None else target.unit
        return [], mismatch((u, u, u), ONE, ZERO, kind="unit")
    if source.unit is not None:
        u = source.unit
        constraints.append(Constraint((u, u, u), exponents((u,)), ONE))

    if include_pairing and source.pairing is not None and target.pairing is not None:
        for a in range(n):
            for b in range(a, n):
                x, y = source.pairing.entry(a, b), target.pairing.entry(a, b)
                if bool(x) != bool(y):
                    return [], mismatch((a, b, b), x, y)
                if x:
                    constraints.append(Constraint((a, b, b), exponents((a, b)), x / y))
    return constraints, None


def _monomial(values: Sequence[GaussRational], powers: Sequence[int]) -> GaussRational:
    result = ONE
    for value, power in zip(values, powers):
        if power > 0:
            for _ in range(power):
                result = result * value
        elif power < 0:
            for _ in range(-power):
                result = result / value
    return result


def solve_diagonal(source: Structure, target: Structure, include_pairing: bool = False) -> IsoReport:
    """Search for scalars lambda with m(e_a) = lambda_a e'_a an isomorphism.

    Constraints are monomial equations lambda^E = r. With U E V = D in Smith
    normal form, substituting lambda = mu^V leaves mu_t^(d_t) = (r^U)_t for
    t below the rank and consistency conditions (r^U)_t = 1 above it. Free
    mu are fixed to 1.
    """
    _check_kinds(source, target)
    if _degrees(source) != _degrees(target):
        raise ShapeMismatch("bases must have the same degrees position by position")

    names = _names(source)
    n = len(names)
    constraints, obstruction = _constraints(source, target, include_pairing)
    if obstruction is not None:
        logger.debug("zero patterns differ at %s", obstruction.triple)
        return IsoReport(Verdict.refuted, obstruction=obstruction)

    ratios = [c.ratio for c in constraints]
    diagonal, u, v = smith_normal_decomposition([c.exponents for c in constraints], columns=n)
    rank = rank_of(diagonal)
    logger.debug("%d constraints on %d scalars, exponent rank %d", len(constraints), n, rank)

    s = [_monomial(ratios, u[t]) for t in range(len(constraints))]
    for t in range(rank, len(constraints)):
        if s[t] != ONE:
            relation = tuple(
                (tuple(names[i] for i in constraints[c].triple), u[t][c])
                for c in range(len(constraints))
                if u[t][c]
            )
            first = relation[0][0]
            logger.debug("multiplicative relation fails: product is %s", format_scalar(s[t]))
            return IsoReport(
                Verdict.refuted,
                obstruction=Obstruction(first, s[t], ONE, kind="relation", relation=relation),
            )

    kernel = tuple(tuple(v[a][t] for a in range(n)) for t in range(rank, n))
    mu: List[Optional[GaussRational]] = [ONE] * n
    missing = []
    for t in range(rank):
        roots = root_in_field(s[t], diagonal[t])
        if roots:
            mu[t] = roots[0]
        else:
            mu[t] = None
            missing.append(t)

    if missing:
        logger.debug("roots of order %s leave Q(i)", [diagonal[t] for t in missing])
        numeric = _numeric_witness(constraints, s, diagonal, mu, v)
        note = ", ".join(f"{format_scalar(s[t])}^(1/{diagonal[t]})" for t in missing)
        return IsoReport(
            Verdict.needs_field_extension,
            numeric_witness=numeric,
            kernel=kernel,
            notes=(f"requires {note}",),
        )

    witness = DiagonalMap(tuple(_monomial(mu, v[a]) for a in range(n)))
    check = verify_map(source, target, witness, check_pairing=include_pairing)
    if not check.ok:
        logger.warning("diagonal solution failed re-verification at %s", check.obstruction.triple)
        return IsoReport(
            Verdict.no_diagonal_solution,
            obstruction=check.obstruction,
            kernel=kernel,
            notes=("solution of the exponent system does not re-verify",),
        )
    return IsoReport(Verdict.solved, witness=witness, linear_witness=check.linear_witness, kernel=kernel)


def _numeric_witness(constraints, s, diagonal, mu, v) -> NumericWitness:
    n = len(v)
    values = np.ones(n, dtype=complex)
    for t, exact in enumerate(mu):
        if t >= len(diagonal) or not diagonal[t]:
            continue
        values[t] = to_complex(exact) if exact is not None else complex(to_complex(s[t]) ** (1.0 / diagonal[t]))
    powers = np.array(v, dtype=float)
    lam = np.prod(values[np.newaxis, :] ** powers, axis=1)

    residual = 0.0
    for constraint in constraints:
        value = np.prod(lam ** np.array(constraint.exponents, dtype=float))
        residual = max(residual, float(abs(value - to_complex(constraint.ratio))))
    if residual >= settings.numeric_residual_threshold:
        logger.warning("numeric witness residual %.3e exceeds %.1e", residual, settings.numeric_residual_threshold)
    return NumericWitness(tuple(complex(x) for x in lam), residual, certifying=False)


def perturb_witness(witness: DiagonalMap, kernel_vector: Sequence[int], scale: GaussRational) -> DiagonalMap:
    """Move a witness along one kernel direction: lambda_a * scale^k_a."""
    return DiagonalMap(
        tuple(_monomial((value, scale), (1, k)) for value, k in zip(witness.scalars, kernel_vector))
    )


def compare_corrected_to_orbifold(resolution_bundle, orbifold_bundle) -> IsoReport:
    """Corrected resolution ring against the orbifold ring, source = orbifold side."""
    source = corrected_structure(orbifold_bundle)
    target = corrected_structure(resolution_bundle)
    return solve_diagonal(source, target)
