"""Command-line front end. Batch jobs in, machine-readable JSON/CSV out.

Exit codes: 0 success; 2 domain errors (non-density inputs, axiom
failures, solver breakdowns), with a message naming the violated
condition on stderr; 1 structural or I/O errors (bad flags, missing or
malformed files). The CLI performs no arithmetic of its own: every
number it prints is a library return value.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, PhiOverflowError, SolverError, StructuralError
from .measure import MeasureSpace, ScalarField, field_from_spec, space_from_spec
from .phi import ExponentialPhi, KappaConstPhi, KappaVariablePhi, PhiFunction, validate_phi
from .family import TangentVector, load_chart, make_chart, normalizer, parametrize, \
    chart_inverse, transition
from .orlicz import MusielakOrliczFunction, luxemburg_norm, orlicz_norm
from .divergence import kappa_divergence, phi_divergence

_COMMANDS = ("validate", "psi", "density", "invert", "transition", "norm", "divergence")


@dataclass
class JobSpec:
    command: str
    phi: str | None = None
    space: str | None = None
    chart: str | None = None
    chart2: str | None = None
    p: str | None = None
    q: str | None = None
    c: str | None = None
    u: str | None = None
    u0: str | None = None
    kind: str | None = None
    out: str | None = None
    tol: float = 1e-12
    fmt: str = "json"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; bad flags are structural here (exit 1)
    def error(self, message):
        raise StructuralError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phifam",
                     description="Deformed-exponential families on finite measure spaces.")
    sub = parser.add_subparsers(dest="command", metavar="|".join(_COMMANDS))

    def common(p):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--tol", type=float, default=1e-12,
                       help="solver tolerance (default 1e-12)")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json",
                       help="output format; csv is available for densities only")

    def phi_space(p, c_required):
        p.add_argument("--phi", required=True, metavar="exp|kappa:K|kappa-var:PATH")
        p.add_argument("--space", help="measure space file (.json or .csv)")
        p.add_argument("--c", required=c_required, metavar="SPEC",
                       help="origin field: path, const:X, or zero")
        p.add_argument("--u0", default="const:1", metavar="SPEC",
                       help="scale direction (default const:1)")

    p = sub.add_parser("validate", help="check the generator axioms")
    phi_space(p, c_required=True)
    common(p)

    for name, extra in (("psi", ("--u",)), ("density", ("--u",)),
                        ("invert", ("--q",)), ("transition", ("--chart2", "--u"))):
        p = sub.add_parser(name)
        p.add_argument("--chart", required=True, help="chart spec JSON file")
        for flag in extra:
            p.add_argument(flag, required=True, metavar="SPEC" if flag != "--chart2" else "PATH")
        common(p)

    p = sub.add_parser("norm", help="Luxemburg or Orlicz norm of a field")
    p.add_argument("--kind", required=True, choices=("luxemburg", "orlicz"))
    phi_space(p, c_required=True)
    p.add_argument("--u", required=True, metavar="SPEC")
    common(p)

    p = sub.add_parser("divergence", help="divergence between two densities")
    p.add_argument("--phi", required=True, metavar="exp|kappa:K|kappa-var:PATH")
    p.add_argument("--space", help="measure space file; unit weights inferred from --p if omitted")
    p.add_argument("--p", required=True, metavar="SPEC")
    p.add_argument("--q", required=True, metavar="SPEC")
    p.add_argument("--u0", default="const:1", metavar="SPEC")
    common(p)

    return parser


def parse_args(argv) -> JobSpec:
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise StructuralError("exactly one command is required "
                              f"(one of: {', '.join(_COMMANDS)})")
    job = JobSpec(command=ns.command)
    for key in vars(job):
        if key != "command" and hasattr(ns, key):
            setattr(job, key, getattr(ns, key))
    return job


# ---- input resolution ------------------------------------------------------


def _parse_phi(spec: str, space: MeasureSpace | None) -> PhiFunction:
    if spec == "exp":
        return ExponentialPhi()
    if spec.startswith("kappa:"):
        try:
            return KappaConstPhi(float(spec.split(":", 1)[1]))
        except ValueError as exc:
            raise StructuralError(f"bad kappa value in {spec!r}") from exc
    if spec.startswith("kappa-var:"):
        if space is None:
            raise StructuralError("kappa-var generators need --space")
        path = spec.split(":", 1)[1]
        kappa = field_from_spec(path, space)
        return KappaVariablePhi(kappa)
    raise StructuralError(f"unknown --phi spec {spec!r} (use exp, kappa:K, or kappa-var:PATH)")


def _peek_point_count(path_text: str) -> int:
    path = Path(path_text)
    if path.suffix.lower() == ".csv":
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
        if rows and rows[0][1].strip().lower() in ("value", "weight"):
            rows = rows[1:]
        return len(rows)
    obj = json.loads(path.read_text())
    return len(obj["values"])


def _resolve_space(job: JobSpec) -> MeasureSpace:
    if job.space:
        return space_from_spec(job.space)
    if job.command == "divergence" and job.p and not (
            job.p == "zero" or job.p.startswith("const:")):
        try:
            n = _peek_point_count(job.p)
        except (OSError, json.JSONDecodeError, KeyError, IndexError) as exc:
            raise StructuralError(f"cannot infer a space from {job.p!r}: {exc}") from exc
        return MeasureSpace.unit(n)
    raise StructuralError("--space is required for this command")


# ---- output ----------------------------------------------------------------


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(field: ScalarField) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["id", "value"])
    for pid, v in zip(field.space.point_ids, field.values):
        writer.writerow([pid, f"{v:.17g}"])
    return buf.getvalue()


def _emit(text: str, job: JobSpec) -> None:
    if job.out:
        Path(job.out).write_text(text)
    else:
        sys.stdout.write(text)


def _field_output(field: ScalarField, job: JobSpec) -> int:
    if job.fmt == "csv":
        _emit(_csv_text(field), job)
    else:
        _emit(_json_text(field.to_json_obj()), job)
    return 0


def _require_json_format(job: JobSpec) -> None:
    if job.fmt != "json":
        raise StructuralError("csv output is available for densities only")


# ---- command bodies ---------------------------------------------------------


def _cmd_validate(job: JobSpec) -> int:
    _require_json_format(job)
    space = _resolve_space(job)
    phi = _parse_phi(job.phi, space)
    c = field_from_spec(job.c, space)
    u0 = field_from_spec(job.u0, space)
    report = validate_phi(phi, space, c, u0)
    _emit(_json_text(report.to_json_obj()), job)
    if not report.passed:
        print("validation failed: "
              + ", ".join(f"{name} failed" for name in report.failures), file=sys.stderr)
        return 2
    return 0


def _cmd_psi(job: JobSpec) -> int:
    _require_json_format(job)
    chart = load_chart(job.chart)
    u = TangentVector(chart, field_from_spec(job.u, chart.space))
    value = normalizer(chart, u, tol=job.tol)
    _emit(_json_text({"value": value}), job)
    return 0


def _cmd_density(job: JobSpec) -> int:
    chart = load_chart(job.chart)
    u = TangentVector(chart, field_from_spec(job.u, chart.space))
    return _field_output(parametrize(chart, u, tol=job.tol), job)


def _cmd_invert(job: JobSpec) -> int:
    _require_json_format(job)
    chart = load_chart(job.chart)
    q = field_from_spec(job.q, chart.space)
    return _field_output(chart_inverse(chart, q).u, job)


def _cmd_transition(job: JobSpec) -> int:
    _require_json_format(job)
    chart1 = load_chart(job.chart)
    chart2 = load_chart(job.chart2)
    w = TangentVector(chart1, field_from_spec(job.u, chart1.space))
    return _field_output(transition(chart1, chart2, w).u, job)


def _cmd_norm(job: JobSpec) -> int:
    _require_json_format(job)
    space = _resolve_space(job)
    phi = _parse_phi(job.phi, space)
    c = field_from_spec(job.c, space)
    u = field_from_spec(job.u, space)
    mof = MusielakOrliczFunction(space, phi, c)
    if job.kind == "luxemburg":
        value = luxemburg_norm(mof, u, tol=job.tol)
    else:
        value = orlicz_norm(mof, u, tol=job.tol)
    _emit(_json_text({"kind": job.kind, "value": value}), job)
    return 0


def _cmd_divergence(job: JobSpec) -> int:
    _require_json_format(job)
    space = _resolve_space(job)
    phi = _parse_phi(job.phi, space)
    p = field_from_spec(job.p, space)
    q = field_from_spec(job.q, space)
    u0 = field_from_spec(job.u0, space)
    if isinstance(phi, ExponentialPhi):
        report = phi_divergence(space, phi, u0, p, q)
    elif isinstance(phi, KappaConstPhi):
        report = kappa_divergence(space, phi.kappa, u0, p, q)
    else:
        report = kappa_divergence(space, phi.kappa, u0, p, q)
    _emit(_json_text(report.to_json_obj()), job)
    return 0


_DISPATCH = {
    "validate": _cmd_validate,
    "psi": _cmd_psi,
    "density": _cmd_density,
    "invert": _cmd_invert,
    "transition": _cmd_transition,
    "norm": _cmd_norm,
    "divergence": _cmd_divergence,
}


def run(job: JobSpec) -> int:
    """Execute a parsed job; raises the library's errors on failure."""
    if job.command not in _DISPATCH:
        raise StructuralError(f"unknown command {job.command!r}")
    return _DISPATCH[job.command](job)


def main(argv=None) -> int:
    try:
        job = parse_args(argv)
        return run(job)
    except (DomainError, SolverError, PhiOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (StructuralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
