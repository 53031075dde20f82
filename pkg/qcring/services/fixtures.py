"""Bundled fixtures and the verification pipeline each one runs."""

import logging
import time
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from sympy.polys.domains import QQ

from qcring.core.config import settings
from qcring.core.errors import QcringError, UnknownFixture
from qcring.core.scalars import ONE, ZERO, GaussRational, format_rational, format_scalar, gauss
from qcring.models.bundle import Bundle
from qcring.models.maps import DiagonalMap, Verdict
from qcring.schemas.report import Report
from qcring.services.bundles import (
    classical_structure,
    corrected_structure,
    load_bundle,
    qc_tensor,
)
from qcring.services.graded_algebra import (
    check_associativity,
    check_structure,
    cubic_form_algebra,
    pairing_signature,
)
from qcring.services.isomorphism import compare_corrected_to_orbifold, solve_diagonal, verify_map
from qcring.services.reports import iso_details, tensor_details
from qcring.services.sector_model import (
    class_map,
    hermitian_gram,
    is_positive_definite,
    qinwang_map,
    sector_algebra,
    signed_product,
)

logger = logging.getLogger(__name__)

FIXTURE_NAMES = (
    "local_cy_genus_g",
    "hilb2_surface",
    "c2_zgamma_pairing",
    "atiyah_flop",
    "mukai_trivial",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise UnknownFixture(f"unknown fixture {name!r}; choose one of {', '.join(FIXTURE_NAMES)}")
    return resources.files("qcring.fixtures").joinpath(f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str, overrides: Optional[Mapping[str, str]] = None) -> Bundle:
    return load_bundle(fixture_text(name), source=f"fixtures/{name}.json", overrides=overrides)


def dump_fixtures(directory) -> List[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in FIXTURE_NAMES:
        path = directory / f"{name}.json"
        path.write_text(fixture_text(name), encoding="utf-8")
        written.append(path)
    return written


def run_fixture(name: str, overrides: Optional[Mapping[str, str]] = None) -> Report:
    bundle = load_fixture(name, overrides)
    report = Report(title=f"fixture {name}")
    started = time.perf_counter()
    _PIPELINES[name](bundle, report)
    elapsed = time.perf_counter() - started
    logger.debug("fixture %s ran %d checks in %.3fs", name, len(report.checks), elapsed)
    if elapsed > settings.fixture_time_budget_seconds:
        logger.warning("fixture %s took %.2fs, over the %.1fs budget", name, elapsed, settings.fixture_time_budget_seconds)
    return report


def _step(report: Report, name: str, check: Callable[[], None]) -> None:
    try:
        check()
    except QcringError as exc:
        logger.debug("check %r raised %s", name, type(exc).__name__)
        report.add(name, "error", str(exc), error=type(exc).__name__)


def _status(ok: bool) -> str:
    return "passed" if ok else "failed"


def _expect_entries(
    report: Report,
    name: str,
    actual: Callable[[int, int, int], GaussRational],
    expected: Mapping[tuple, GaussRational],
    names: Sequence[str],
) -> None:
    details = {}
    ok = True
    for (i, j, k), value in expected.items():
        got = actual(i, j, k)
        label = f"<{names[i]},{names[j]},{names[k]}>"
        details[label] = format_scalar(got) if got == value else f"{format_scalar(got)} (expected {format_scalar(value)})"
        ok = ok and got == value
    report.add(name, _status(ok), "" if ok else "values differ", **details)


def _structure_checks(report: Report, name: str, algebra, status_on_failure: str = "failed") -> None:
    violations = check_structure(algebra) + check_associativity(algebra)
    if not violations:
        report.add(name, "passed", "graded, commutative, unital and associative")
        return
    first = violations[0]
    report.add(
        name,
        status_on_failure,
        f"{len(violations)} violated identities",
        first=f"{first.kind} at {','.join(algebra.basis[i].name for i in first.indices)}",
    )


def _iso_check(report: Report, name: str, iso, names, expected_ok: bool = True, informational: bool = False) -> None:
    if informational:
        status = "info"
    else:
        status = _status(iso.ok == expected_ok)
    report.add(name, status, iso.verdict.value, **iso_details(iso, names))


def _iota_check(report: Report, name: str, bundle: Bundle, expected: GaussRational) -> None:
    classes = class_map(bundle.group)
    details = {}
    ok = True
    for element in bundle.basis:
        if element.sector is None:
            continue
        value = bundle.iota[classes[bundle.group.index(element.sector)]]
        details[element.name] = format_rational(value)
        ok = ok and value == expected.x
    report.add(name, _status(ok), f"expected {format_scalar(expected)}", **details)


# Pipelines

def _local_cy(bundle: Bundle, report: Report) -> None:
    orbifold = bundle.counterpart
    g = bundle.parameters["g"]
    names = bundle.names()
    alpha, beta = bundle.index("alpha'"), bundle.index("beta'")
    eight = gauss(8)

    def classical():
        form = classical_structure(bundle)
        expected = {(alpha, beta, beta): -2 * ONE, (beta, beta, beta): eight * (ONE - g)}
        _expect_entries(report, "classical cubic form", form.value, expected, names)

    def correction():
        qc = qc_tensor(bundle)
        expected = {
            (alpha, alpha, alpha): ZERO,
            (alpha, alpha, beta): ZERO,
            (alpha, beta, beta): ZERO,
            (beta, beta, beta): -eight * (ONE - g),
        }
        _expect_entries(report, "quantum correction at q = -1", qc.get, expected, names)

    def corrected():
        form = corrected_structure(bundle)
        orbifold_form = classical_structure(orbifold)
        b = orbifold.index("beta")
        expected = {(beta, beta, beta): orbifold_form.value(b, b, b)}
        _expect_entries(report, "corrected <beta',beta',beta'> matches the orbifold", form.value, expected, names)
        _structure_checks(report, "corrected cubic-form algebra", cubic_form_algebra(form))

    def iota():
        _iota_check(report, "degree shifting number of the twisted sector", orbifold, ONE)

    def isomorphism():
        iso = compare_corrected_to_orbifold(bundle, orbifold)
        _iso_check(report, "corrected resolution vs orbifold", iso, orbifold.names())

    def candidate():
        iso = verify_map(corrected_structure(orbifold), corrected_structure(bundle), orbifold.candidate_map)
        _iso_check(report, "literal candidate map", iso, orbifold.names(), informational=True)

    for name, check in (
        ("classical cubic form", classical),
        ("quantum correction at q = -1", correction),
        ("corrected cubic form", corrected),
        ("degree shifting number of the twisted sector", iota),
        ("corrected resolution vs orbifold", isomorphism),
        ("literal candidate map", candidate),
    ):
        _step(report, name, check)


def _hilb2(bundle: Bundle, report: Report) -> None:
    orbifold = bundle.counterpart
    names = bundle.names()
    c1 = bundle.parameters["<C1,h>"]
    e1, eh = bundle.index("1bar"), bundle.index("hbar")
    four = gauss(4)

    def orbifold_ring():
        _structure_checks(report, "orbifold ring", classical_structure(orbifold))

    def classical_ring():
        _structure_checks(report, "classical resolution ring", classical_structure(bundle), status_on_failure="info")

    def correction():
        qc = qc_tensor(bundle)
        _expect_entries(report, "quantum correction at q = -1", qc.get, {(e1, e1, eh): four * c1}, names)

    def cancellation():
        corrected = corrected_structure(bundle)
        expected = {(e1, e1, eh): -four * c1}
        _expect_entries(report, "classical <1bar,1bar,hbar>", bundle.triples.get, expected, names)
        _expect_entries(report, "corrected <1bar,1bar,hbar> cancels", corrected.triples.get, {(e1, e1, eh): ZERO}, names)
        _structure_checks(report, "corrected resolution ring", corrected)

    def classical_iso():
        iso = solve_diagonal(classical_structure(orbifold), classical_structure(bundle))
        _iso_check(report, "classical resolution vs orbifold", iso, orbifold.names(), informational=True)

    def corrected_iso():
        iso = compare_corrected_to_orbifold(bundle, orbifold)
        _iso_check(report, "corrected resolution vs orbifold", iso, orbifold.names())

    def iota():
        _iota_check(report, "degree shifting number of the transposition sector", orbifold, ONE)

    def sign_twist():
        algebra = classical_structure(orbifold)
        sectors = sector_algebra(algebra, orbifold.group, orbifold.iota)
        reassembled = sectors.total().products == algebra.products
        report.add("sector components sum to the product", _status(reassembled), f"{len(sectors.components)} components")
        signed = signed_product(sectors)
        iso = verify_map(signed.algebra, algebra, qinwang_map(sectors))
        _iso_check(report, "i^iota intertwines signed and orbifold products", iso, orbifold.names())

    def candidate():
        iso = verify_map(classical_structure(orbifold), corrected_structure(bundle), orbifold.candidate_map)
        _iso_check(report, "literal candidate map", iso, orbifold.names(), informational=True)

    for name, check in (
        ("orbifold ring", orbifold_ring),
        ("classical resolution ring", classical_ring),
        ("quantum correction at q = -1", correction),
        ("cancellation", cancellation),
        ("classical resolution vs orbifold", classical_iso),
        ("corrected resolution vs orbifold", corrected_iso),
        ("degree shifting number of the transposition sector", iota),
        ("sign twist", sign_twist),
        ("literal candidate map", candidate),
    ):
        _step(report, name, check)


def _c2_zgamma(bundle: Bundle, report: Report) -> None:
    resolution = bundle.counterpart

    def orbifold_signature():
        positive, negative, zero = pairing_signature(bundle.pairing)
        indefinite = positive > 0 and negative > 0
        report.add(
            "orbifold degree-2 pairing is indefinite",
            _status(indefinite),
            f"signature ({positive},{negative},{zero})",
        )

    def iota():
        _iota_check(report, "degree shifting numbers", bundle, ONE)

    def hermitian():
        gram = hermitian_gram(bundle.pairing, bundle.involution, bundle.basis, bundle.group)
        rows = {f"row {a}": " ".join(format_scalar(value) for value in row) for a, row in enumerate(gram.rows)}
        report.add("hermitian pairing is positive definite", _status(is_positive_definite(gram)), "", **rows)

    def resolution_signature():
        positive, negative, zero = pairing_signature(resolution.pairing)
        report.add("resolution intersection form", "info", f"signature ({positive},{negative},{zero})")

    for name, check in (
        ("orbifold degree-2 pairing is indefinite", orbifold_signature),
        ("degree shifting numbers", iota),
        ("hermitian pairing is positive definite", hermitian),
        ("resolution intersection form", resolution_signature),
    ):
        _step(report, name, check)


def _atiyah_flop(bundle: Bundle, report: Report) -> None:
    flopped = bundle.counterpart
    names = bundle.names()
    d1 = bundle.index("D1")
    d = bundle.parameters["d"]
    cube = d * d * d
    half = gauss(QQ(1, 2))

    def classical():
        iso = verify_map(classical_structure(bundle), classical_structure(flopped), DiagonalMap.identity(bundle.dim))
        _iso_check(report, "classical cubic forms", iso, names, informational=True)

    def correction():
        _expect_entries(report, "correction on X", qc_tensor(bundle).get, {(d1, d1, d1): -half * cube}, names)
        _expect_entries(report, "correction on the flop", qc_tensor(flopped).get, {(d1, d1, d1): half * cube}, names)

    def corrected():
        left, right = corrected_structure(bundle), corrected_structure(flopped)
        agree = left.tensor.entries == right.tensor.entries
        report.add("corrected cubic forms agree", _status(agree), "", **tensor_details(left.tensor, names))
        iso = verify_map(left, right, DiagonalMap.identity(bundle.dim))
        _iso_check(report, "identity on corrected forms", iso, names)

    def solver():
        iso = solve_diagonal(corrected_structure(bundle), corrected_structure(flopped))
        _iso_check(report, "diagonal solver on corrected forms", iso, names)

    for name, check in (
        ("classical cubic forms", classical),
        ("correction", correction),
        ("corrected cubic forms agree", corrected),
        ("diagonal solver on corrected forms", solver),
    ):
        _step(report, name, check)


def _mukai(bundle: Bundle, report: Report) -> None:
    flopped = bundle.counterpart
    names = bundle.names()

    def correction():
        trivial = qc_tensor(bundle).is_zero() and qc_tensor(flopped).is_zero()
        report.add("quantum corrections vanish", _status(trivial))

    def rings():
        classical, corrected = classical_structure(bundle), corrected_structure(bundle)
        report.add("corrected ring equals classical ring", _status(classical.products == corrected.products))
        _structure_checks(report, "corrected ring", corrected)

    def identity():
        iso = verify_map(corrected_structure(flopped), corrected_structure(bundle), DiagonalMap.identity(bundle.dim), check_pairing=True)
        _iso_check(report, "identity isomorphism", iso, names)

    def solver():
        iso = compare_corrected_to_orbifold(bundle, flopped)
        is_identity = iso.witness is not None and all(value == ONE for value in iso.witness.scalars)
        report.add(
            "diagonal solver finds the identity",
            _status(iso.verdict == Verdict.solved and is_identity),
            iso.verdict.value,
            **iso_details(iso, names),
        )

    for name, check in (
        ("quantum corrections vanish", correction),
        ("corrected ring", rings),
        ("identity isomorphism", identity),
        ("diagonal solver finds the identity", solver),
    ):
        _step(report, name, check)


_PIPELINES: Dict[str, Callable[[Bundle, Report], None]] = {
    "local_cy_genus_g": _local_cy,
    "hilb2_surface": _hilb2,
    "c2_zgamma_pairing": _c2_zgamma,
    "atiyah_flop": _atiyah_flop,
    "mukai_trivial": _mukai,
}
