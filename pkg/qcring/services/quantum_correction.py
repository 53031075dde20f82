"""Quantum correction of triple intersections by exceptional-curve q-series."""

import logging
from typing import Iterable, Optional, Sequence

from qcring.core.config import settings
from qcring.core.errors import DegenerateRays, PoleAtOne, QValueRejected, SchemaViolation
from qcring.core.scalars import ONE, ZERO, GaussRational, format_scalar, parse_scalar
from qcring.models.algebra import BasisElement, GradedAlgebra, PairingMatrix, TripleTensor
from qcring.models.series import ExtremalRaySet, GWSeries, QPoint
from qcring.services.graded_algebra import build_algebra

logger = logging.getLogger(__name__)


def check_q_value(text: str) -> GaussRational:
    """Only the evaluation point q = -1 is supported."""
    value = parse_scalar(text)
    if value != -ONE:
        raise QValueRejected(f"q = {text} is not supported; corrections are evaluated at q = -1")
    return value


def evaluation_point(rays: ExtremalRaySet, q_value: Optional[str] = None) -> QPoint:
    value = check_q_value(settings.q_value if q_value is None else q_value)
    return QPoint(tuple(value for _ in range(rays.size)))


def validate_rays(rays: ExtremalRaySet) -> None:
    if rays.size < 1:
        raise SchemaViolation("rays.names", "at least one extremal ray is required")
    if len(set(rays.names)) != rays.size:
        raise SchemaViolation("rays.names", "ray names must be unique")


def validate_series(series: GWSeries, rays: ExtremalRaySet, size: int) -> None:
    if any(not 0 <= index < size for index in series.triple):
        raise SchemaViolation("series.triple", f"{series.triple} is out of range")
    seen = set()
    for term in series.terms:
        if len(term.degree) != rays.size:
            raise SchemaViolation("series.terms.degree", "one exponent per ray is required")
        if any(a < 0 for a in term.degree) or not any(term.degree):
            raise SchemaViolation("series.terms.degree", f"{term.degree} is not a positive curve degree")
        if term.degree in seen:
            raise SchemaViolation("series.terms.degree", f"degree {term.degree} listed twice")
        seen.add(term.degree)
    for tail in series.tails:
        if not 0 <= tail.ray < rays.size:
            raise SchemaViolation("series.tails.ray", f"ray index {tail.ray} out of range")
        if tail.start < 1:
            raise SchemaViolation("series.tails.from", "tails start at degree 1 or later")
        for degree in seen:
            pure = all(a == 0 for r, a in enumerate(degree) if r != tail.ray)
            if pure and degree[tail.ray] >= tail.start:
                raise SchemaViolation("series.tails", f"tail along {rays.names[tail.ray]} overlaps term {degree}")


def evaluate_series(series: GWSeries, q: QPoint, rays: Optional[ExtremalRaySet] = None) -> GaussRational:
    """Finite terms first, then the closed forms c q^d0 / (1 - q) of the tails."""
    total = ZERO
    for term in series.terms:
        monomial = term.value
        for r, exponent in enumerate(term.degree):
            monomial = monomial * _power(q.values[r], exponent)
        total = total + monomial
    for tail in series.tails:
        q_r = q.values[tail.ray]
        if q_r == ONE:
            name = rays.names[tail.ray] if rays is not None else str(tail.ray)
            raise PoleAtOne(name, series.triple)
        total = total + tail.value * _power(q_r, tail.start) / (ONE - q_r)
    return total


def _power(z: GaussRational, exponent: int) -> GaussRational:
    result = ONE
    for _ in range(exponent):
        result = result * z
    return result


def qc_triple_tensor(
    series_list: Iterable[GWSeries],
    rays: ExtremalRaySet,
    basis: Sequence[BasisElement],
    top_degree=None,
    q: Optional[QPoint] = None,
) -> TripleTensor:
    """<a,b,c>_qc at q = (-1, ..., -1); unlisted triples are 0."""
    validate_rays(rays)
    if not rays.nondegenerate:
        raise DegenerateRays("quantum correction needs linearly independent extremal rays")
    q = q if q is not None else evaluation_point(rays)
    size = len(basis)

    totals = {}
    for series in series_list:
        validate_series(series, rays, size)
        key = tuple(sorted(series.triple))
        value = evaluate_series(series, q, rays)
        logger.debug(
            "qc<%s> = %s",
            ",".join(basis[i].name for i in series.triple),
            format_scalar(value),
        )
        totals[key] = totals.get(key, ZERO) + value
    return TripleTensor.build(size, totals.items(), top_degree)


def corrected_triples(classical: TripleTensor, qc: TripleTensor) -> TripleTensor:
    return classical + qc


def corrected_product(
    corrected: TripleTensor,
    pairing: PairingMatrix,
    basis: Sequence[BasisElement],
    unit: Optional[int] = None,
) -> GradedAlgebra:
    return build_algebra(basis, pairing, corrected, unit)
