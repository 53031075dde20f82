"""Rendering reports and summarizing verdicts in the exact scalar syntax."""

from typing import Dict, Literal, Sequence

from qcring.core.scalars import format_scalar
from qcring.models.algebra import TripleTensor
from qcring.models.maps import DiagonalMap, IsoReport, Obstruction
from qcring.schemas.report import Report

ReportFormat = Literal["text", "json"]


def emit_report(report: Report, output_format: ReportFormat = "text") -> bytes:
    if output_format == "json":
        return (report.model_dump_json(indent=2) + "\n").encode("utf-8")
    return render_text(report).encode("utf-8")


def parse_report(data) -> Report:
    return Report.model_validate_json(data)


def render_text(report: Report) -> str:
    lines = [f"qcring report: {report.title}"]
    for check in report.checks:
        line = f"  [{check.status}] {check.name}"
        if check.message:
            line += f": {check.message}"
        lines.append(line)
        for key, value in check.details.items():
            lines.append(f"      {key} = {value}")
    counts = report.counts()
    total = len(report.checks)
    if report.ok:
        lines.append(f"all checks passed ({total} checks)")
    else:
        lines.append(f"{counts['failed']} failed, {counts['error']} errors ({total} checks)")
    return "\n".join(lines) + "\n"


def format_witness(names: Sequence[str], witness: DiagonalMap) -> str:
    return ", ".join(f"{name} -> {format_scalar(value)}" for name, value in zip(names, witness.scalars))


def format_obstruction(obstruction: Obstruction) -> str:
    text = f"<{','.join(obstruction.triple)}> ({obstruction.kind}): {format_scalar(obstruction.lhs)} != {format_scalar(obstruction.rhs)}"
    if obstruction.relation:
        terms = " * ".join(f"r<{','.join(triple)}>^{power}" for triple, power in obstruction.relation)
        text += f" via {terms}"
    return text


def iso_details(iso: IsoReport, names: Sequence[str]) -> Dict[str, str]:
    details = {"verdict": iso.verdict.value}
    if iso.witness is not None:
        details["witness"] = format_witness(names, iso.witness)
    if iso.obstruction is not None:
        details["obstruction"] = format_obstruction(iso.obstruction)
    if iso.kernel:
        details["kernel"] = "; ".join(str(list(vector)) for vector in iso.kernel)
    if iso.numeric_witness is not None:
        numeric = iso.numeric_witness
        values = ", ".join(f"{value.real:.12g}{value.imag:+.12g}j" for value in numeric.values)
        details["numeric witness (non-certifying)"] = values
        details["numeric residual"] = f"{numeric.residual:.3e}"
    for position, note in enumerate(iso.notes):
        details[f"note {position + 1}"] = note
    return details


def tensor_details(tensor: TripleTensor, names: Sequence[str]) -> Dict[str, str]:
    return {
        f"<{names[i]},{names[j]},{names[k]}>": format_scalar(value)
        for (i, j, k), value in tensor.items()
    }
