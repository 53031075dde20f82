import logging
import sys
from typing import Optional, Tuple

import click

from qcring.core.config import Settings
from qcring.core.errors import InputError, QcringError
from qcring.models.algebra import CubicForm
from qcring.schemas.report import Report
from qcring.services.bundles import classical_structure, corrected_structure, parse_bundle, qc_tensor
from qcring.services.fixtures import dump_fixtures, run_fixture
from qcring.services.graded_algebra import check_associativity, check_structure, cubic_form_algebra
from qcring.services.isomorphism import solve_diagonal, verify_map
from qcring.services.quantum_correction import check_q_value
from qcring.services.reports import emit_report, iso_details, tensor_details

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2


def _configure_logging(config: Settings) -> None:
    logging.basicConfig(
        level=getattr(logging, config.log_level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _finish(ctx: click.Context, report: Report) -> None:
    config: Settings = ctx.obj
    click.echo(emit_report(report, config.report_format), nl=False)
    ctx.exit(EXIT_OK if report.ok else EXIT_REFUTED)


def _fail(ctx: click.Context, exc: QcringError) -> None:
    click.echo(f"error: {exc}", err=True)
    ctx.exit(EXIT_INPUT if isinstance(exc, InputError) else EXIT_REFUTED)


def _as_algebra(structure):
    return cubic_form_algebra(structure) if isinstance(structure, CubicForm) else structure


def _add_structure(report: Report, name: str, structure) -> None:
    algebra = _as_algebra(structure)
    violations = check_structure(algebra) + check_associativity(algebra)
    details = {
        f"{v.kind} {index + 1}": f"{','.join(algebra.basis[i].name for i in v.indices)} {v.detail}".strip()
        for index, v in enumerate(violations)
    }
    report.add(name, "passed" if not violations else "failed", f"{len(violations)} violations", **details)


@click.group()
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text", help="Report format.")
@click.option("--q-value", default="-1", help="Evaluation point of the quantum correction; only -1 is accepted.")
@click.option("--verbose", is_flag=True, help="Debug logging on stderr.")
@click.pass_context
def cli(ctx: click.Context, output_format: str, q_value: str, verbose: bool) -> None:
    """Quantum-corrected cup products, orbifold sectors and ring isomorphisms."""
    config = Settings(report_format=output_format, q_value=q_value, log_level="DEBUG" if verbose else "WARNING")
    _configure_logging(config)
    try:
        check_q_value(config.q_value)
    except QcringError as exc:
        _fail(ctx, exc)
    ctx.obj = config


@cli.command()
@click.argument("bundle", type=click.Path(dir_okay=False))
@click.pass_context
def check(ctx: click.Context, bundle: str) -> None:
    """Structure and associativity checks on a bundle's ring."""
    try:
        loaded = parse_bundle(bundle)
        report = Report(title=f"check {loaded.name}")
        _add_structure(report, "classical ring", classical_structure(loaded))
        if loaded.has_correction:
            _add_structure(report, "corrected ring", corrected_structure(loaded))
    except QcringError as exc:
        _fail(ctx, exc)
    _finish(ctx, report)


@cli.command()
@click.argument("bundle", type=click.Path(dir_okay=False))
@click.pass_context
def correct(ctx: click.Context, bundle: str) -> None:
    """Print the quantum correction and the corrected triple intersections."""
    try:
        loaded = parse_bundle(bundle)
        names = loaded.names()
        report = Report(title=f"correct {loaded.name}")
        report.add("quantum correction at q = -1", "info", "", **tensor_details(qc_tensor(loaded), names))
        structure = corrected_structure(loaded)
        tensor = structure.tensor if isinstance(structure, CubicForm) else structure.triples
        report.add("corrected triple intersections", "info", "", **tensor_details(tensor, names))
    except QcringError as exc:
        _fail(ctx, exc)
    _finish(ctx, report)


@cli.command()
@click.argument("source", type=click.Path(dir_okay=False))
@click.argument("target", type=click.Path(dir_okay=False))
@click.pass_context
def iso(ctx: click.Context, source: str, target: str) -> None:
    """Compare the corrected rings of two bundles."""
    try:
        left, right = parse_bundle(source), parse_bundle(target)
        a, b = corrected_structure(left), corrected_structure(right)
        names = left.names()
        report = Report(title=f"iso {left.name} -> {right.name}")
        if left.candidate_map is not None:
            verdict = verify_map(a, b, left.candidate_map)
            report.add("candidate map", "passed" if verdict.ok else "failed", verdict.verdict.value, **iso_details(verdict, names))
        verdict = solve_diagonal(a, b)
        report.add("diagonal solver", "passed" if verdict.ok else "failed", verdict.verdict.value, **iso_details(verdict, names))
    except QcringError as exc:
        _fail(ctx, exc)
    _finish(ctx, report)


def _parse_assignment(ctx, param, values: Tuple[str, ...]):
    overrides = {}
    for value in values:
        name, sep, text = value.partition("=")
        if not sep or not name:
            raise click.BadParameter(f"expected NAME=VALUE, got {value!r}")
        overrides[name.strip()] = text.strip()
    return overrides


@cli.command()
@click.argument("name")
@click.option("--set", "overrides", multiple=True, callback=_parse_assignment, help="Override a fixture parameter, e.g. --set g=3.")
@click.pass_context
def fixture(ctx: click.Context, name: str, overrides) -> None:
    """Run one of the bundled fixtures end to end."""
    try:
        report = run_fixture(name, overrides)
    except QcringError as exc:
        _fail(ctx, exc)
    _finish(ctx, report)


@cli.command("dump-fixtures")
@click.argument("directory", type=click.Path(file_okay=False))
@click.pass_context
def dump_fixtures_command(ctx: click.Context, directory: str) -> None:
    """Write the bundled fixtures to DIRECTORY for editing."""
    try:
        written = dump_fixtures(directory)
    except OSError as exc:
        ctx.fail(f"cannot write fixtures to {directory}: {exc.strerror or exc}")
    for path in written:
        click.echo(str(path))


def main(argv: Optional[list] = None) -> None:
    cli.main(args=argv, prog_name="qcring")


if __name__ == "__main__":
    main()
