"""Loading bundle files into fully resolved, exact Bundle objects."""

import json
import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from pydantic import ValidationError

from qcring.core.errors import (
    InvalidGroupTable,
    ParseError,
    SchemaViolation,
    UnresolvedSymbol,
    UnsupportedTailKind,
)
from qcring.core.scalars import ONE, GaussRational, Rational, evaluate_expression
from qcring.models.algebra import BasisElement, CubicForm, GradedAlgebra, PairingMatrix, TripleTensor
from qcring.models.bundle import Bundle
from qcring.models.maps import DiagonalMap
from qcring.models.sector import GroupSpec
from qcring.models.series import ExtremalRaySet, GWSeries, SeriesTail, SeriesTerm
from qcring.schemas.bundle import AgeIota, BundleDocument, CycleTypeIota, GroupEntry
from qcring.services.graded_algebra import build_algebra, cubic_form, default_unit
from qcring.services.quantum_correction import corrected_product, corrected_triples, qc_triple_tensor
from qcring.services.sector_model import age, iota_table, make_group, perm_degree_shift, standard_group

logger = logging.getLogger(__name__)

Structure = Union[GradedAlgebra, CubicForm]


def parse_bundle(path: Union[str, Path], overrides: Optional[Mapping[str, str]] = None) -> Bundle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read bundle: {exc.strerror}", str(path)) from exc
    return load_bundle(text, source=str(path), overrides=overrides)


def load_bundle(text: str, source: Optional[str] = None, overrides: Optional[Mapping[str, str]] = None) -> Bundle:
    document = parse_document(text, source)
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(document.parameters))
    if unknown:
        raise SchemaViolation(f"parameters.{unknown[0]}", "is not a parameter of this bundle")
    bundle = resolve_document(document, source=source, overrides=overrides)
    logger.debug("loaded bundle %s (%d basis elements)", bundle.name, bundle.dim)
    return bundle


def parse_document(text: str, source: Optional[str] = None) -> BundleDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source, exc.lineno, exc.colno) from exc
    try:
        return BundleDocument.model_validate(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        key = ".".join(str(part) for part in error["loc"]) or "<root>"
        raise SchemaViolation(key, error["msg"]) from exc


def resolve_document(
    document: BundleDocument,
    base_parameters: Optional[Mapping[str, GaussRational]] = None,
    source: Optional[str] = None,
    overrides: Optional[Mapping[str, str]] = None,
) -> Bundle:
    overrides = overrides or {}
    parameters: Dict[str, GaussRational] = dict(base_parameters or {})
    for name, text in document.parameters.items():
        parameters[name] = _scalar(overrides.get(name, text), parameters, f"parameters.{name}", source)

    group = None
    iota = None
    if document.group is not None:
        group, iota = _group(document.group, parameters, source)

    basis = []
    for position, entry in enumerate(document.basis):
        degree = _real(entry.degree, parameters, f"basis[{position}].degree", source)
        if group is not None and entry.sector is not None and entry.sector not in group.names:
            raise UnresolvedSymbol(entry.sector, f"basis[{position}].sector")
        basis.append(BasisElement(entry.name, degree, entry.sector))
    lookup = {element.name: position for position, element in enumerate(basis)}
    if len(lookup) != len(basis):
        raise SchemaViolation("basis", "basis names must be unique")

    top_degree = None
    if document.top_degree is not None:
        top_degree = _real(document.top_degree, parameters, "top_degree", source)

    items = []
    for position, entry in enumerate(document.triples):
        key = f"triples[{position}]"
        indices = tuple(_index(name, lookup, key) for name in (entry.i, entry.j, entry.k))
        items.append((indices, _scalar(entry.value, parameters, f"{key}.value", source)))
    triples = TripleTensor.build(len(basis), items, top_degree)

    if document.cubic_form and document.pairing is not None:
        raise SchemaViolation("pairing", "a cubic-form bundle carries no pairing")
    unit = _index(document.unit, lookup, "unit") if document.unit is not None else None
    pairing = None
    if not document.cubic_form:
        if unit is None:
            unit = default_unit(basis)
        pairing = _pairing(document, triples, unit, parameters, source)

    rays = None
    if document.rays is not None:
        rays = ExtremalRaySet(tuple(document.rays.names), document.rays.nondegenerate)
    series = _series(document, rays, lookup, parameters, source)

    involution = None
    if document.involution is not None:
        permutation = list(range(len(basis)))
        for name, image in document.involution.items():
            permutation[_index(name, lookup, "involution")] = _index(image, lookup, f"involution.{name}")
        involution = tuple(permutation)

    candidate_map = None
    if document.candidate_map is not None:
        scalars = [ONE] * len(basis)
        for name, text in document.candidate_map.items():
            scalars[_index(name, lookup, "candidate_map")] = _scalar(text, parameters, f"candidate_map.{name}", source)
        if any(not value for value in scalars):
            raise SchemaViolation("candidate_map", "scalars must be nonzero")
        candidate_map = DiagonalMap(tuple(scalars))

    counterpart = None
    if document.counterpart is not None:
        counterpart = resolve_document(document.counterpart, parameters, source)

    return Bundle(
        name=document.metadata.name,
        description=document.metadata.description,
        notes=tuple(document.metadata.notes),
        parameters=parameters,
        basis=tuple(basis),
        unit=unit,
        top_degree=top_degree,
        pairing=pairing,
        cubic_form=document.cubic_form,
        triples=triples,
        rays=rays,
        series=series,
        group=group,
        iota=iota,
        involution=involution,
        candidate_map=candidate_map,
        counterpart=counterpart,
        source=source,
    )


def _scalar(text, parameters: Mapping[str, GaussRational], key: str, source: Optional[str]) -> GaussRational:
    try:
        return evaluate_expression(str(text), parameters, key)
    except ParseError as exc:
        raise ParseError(f"{key}: {exc}", source) from exc


def _real(text, parameters: Mapping[str, GaussRational], key: str, source: Optional[str]) -> Rational:
    value = _scalar(text, parameters, key, source)
    if value.y:
        raise SchemaViolation(key, "must be a rational number")
    return value.x


def _index(name: str, lookup: Mapping[str, int], key: str) -> int:
    if name not in lookup:
        raise UnresolvedSymbol(name, key)
    return lookup[name]


def _pairing(document: BundleDocument, triples: TripleTensor, unit, parameters, source) -> Optional[PairingMatrix]:
    size = len(document.basis)
    if document.pairing is None:
        return None
    if document.pairing == "from_unit":
        if unit is None:
            raise SchemaViolation("pairing", "from_unit needs a degree-0 unit")
        return PairingMatrix.from_rows([[triples.get(unit, a, b) for b in range(size)] for a in range(size)])
    rows = document.pairing
    if len(rows) != size or any(len(row) != size for row in rows):
        raise SchemaViolation("pairing", f"expected a {size}x{size} matrix")
    return PairingMatrix.from_rows(
        [[_scalar(value, parameters, f"pairing[{a}][{b}]", source) for b, value in enumerate(row)] for a, row in enumerate(rows)]
    )


def _series(document: BundleDocument, rays, lookup, parameters, source) -> tuple:
    if not document.series:
        return ()
    if rays is None:
        raise SchemaViolation("rays", "series need a set of extremal rays")
    ray_lookup = {name: position for position, name in enumerate(rays.names)}

    resolved = []
    for n, entry in enumerate(document.series):
        key = f"series[{n}]"
        triple = tuple(_index(name, lookup, f"{key}.triple") for name in entry.triple)
        terms = []
        for m, term in enumerate(entry.terms):
            exponents = [0] * rays.size
            for ray, exponent in term.degree.items():
                exponents[_index(ray, ray_lookup, f"{key}.terms[{m}].degree")] = exponent
            terms.append(SeriesTerm(tuple(exponents), _scalar(term.value, parameters, f"{key}.terms[{m}].value", source)))
        tails = []
        for m, tail in enumerate(entry.tails):
            if tail.kind != "constant":
                raise UnsupportedTailKind(f"{key}.tails[{m}]: tail kind {tail.kind!r} is not supported")
            ray = _index(tail.ray, ray_lookup, f"{key}.tails[{m}].ray")
            tails.append(SeriesTail(ray, tail.start, _scalar(tail.value, parameters, f"{key}.tails[{m}].value", source)))
        resolved.append(GWSeries(triple, tuple(terms), tuple(tails)))
    return tuple(resolved)


def _group(entry: GroupEntry, parameters, source):
    if entry.standard is not None:
        group = standard_group(entry.standard)
    else:
        if not entry.elements or entry.table is None:
            raise SchemaViolation("group", "give either a standard group name or elements with a table")
        lookup = {name: position for position, name in enumerate(entry.elements)}
        table = [[_index(name, lookup, "group.table") for name in row] for row in entry.table]
        group = make_group(entry.elements, table)
    if entry.order is not None and entry.order != group.order:
        raise InvalidGroupTable(f"declared order {entry.order} but the table has {group.order} elements")

    lookup = {name: position for position, name in enumerate(group.names)}
    assignments = {}
    for name, value in entry.iota.items():
        key = f"group.iota.{name}"
        element = _index(name, lookup, key)
        if isinstance(value, AgeIota):
            assignments[element] = age([_real(x, parameters, f"{key}.age", source) for x in value.age])
        elif isinstance(value, CycleTypeIota):
            assignments[element] = perm_degree_shift(value.cycle_type, value.fiber_dim)
        else:
            assignments[element] = _real(value, parameters, key, source)
    return group, iota_table(group, assignments)


# Structures derived from a bundle

def classical_structure(bundle: Bundle) -> Structure:
    if bundle.cubic_form:
        return cubic_form(bundle.basis, bundle.triples)
    if bundle.pairing is None:
        raise SchemaViolation("pairing", f"bundle {bundle.name} has no pairing to build a product from")
    return build_algebra(bundle.basis, bundle.pairing, bundle.triples, bundle.unit)


def qc_tensor(bundle: Bundle) -> TripleTensor:
    if not bundle.series:
        return TripleTensor.zero(bundle.dim, bundle.top_degree)
    return qc_triple_tensor(bundle.series, bundle.rays, bundle.basis, bundle.top_degree)


def corrected_tensor(bundle: Bundle) -> TripleTensor:
    return corrected_triples(bundle.triples, qc_tensor(bundle))


def corrected_structure(bundle: Bundle) -> Structure:
    tensor = corrected_tensor(bundle)
    if bundle.cubic_form:
        return cubic_form(bundle.basis, tensor)
    if bundle.pairing is None:
        raise SchemaViolation("pairing", f"bundle {bundle.name} has no pairing to build a product from")
    return corrected_product(tensor, bundle.pairing, bundle.basis, bundle.unit)
