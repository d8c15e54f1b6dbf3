"""Command-line entry point: ``resloc {residue,fm,futaki,chern,oracle,verify}``.

Exit codes: 0 success, 1 malformed input, 2 exponent or size cap reached
(non-isolated zero or cap too low), 3 internal invariant violation or a
failed reproduction check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .cpn import (
    ChartField,
    ProjectiveVectorField,
    chern_numbers,
    chern_spec,
    futaki,
    futaki_morita_detail,
    max_degenerate_field,
    closed_form_max_degenerate,
)
from .errors import (
    InvalidCertificate,
    InvariantViolation,
    NotDiagonalDistinct,
    NotIsolatedOrCapTooLow,
    ParseError,
    ReslocError,
    ResourceLimitError,
    SingularOnSphere,
)
from .gaussian import GaussianRational
from .groebner import DEFAULT_MAX_EXPONENT, MembershipCertificate, verify_certificate
from .matrix import parse_phi
from .polynomial import as_poly, infer_nvars, parse_poly
from .residue import ResidueProblem, solve_residue

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAP = 2
EXIT_INTERNAL = 3

_EXIT_CODES = [
    (ParseError, EXIT_INPUT),
    (NotIsolatedOrCapTooLow, EXIT_CAP),
    (ResourceLimitError, EXIT_CAP),
    (InvariantViolation, EXIT_INTERNAL),
    (InvalidCertificate, EXIT_INTERNAL),
    (NotDiagonalDistinct, EXIT_INPUT),
    (SingularOnSphere, EXIT_INPUT),
]


class InputError(ReslocError):
    """Bad command-line input that is not a polynomial parse failure."""


def exit_code_for(exc: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(exc, cls):
            return code
    if isinstance(exc, (InputError, ValueError, json.JSONDecodeError, OSError)):
        return EXIT_INPUT
    return EXIT_INTERNAL


def max_exponent_from_env(default: int = DEFAULT_MAX_EXPONENT) -> int:
    raw = os.environ.get("RESLOC_MAX_EXP")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"RESLOC_MAX_EXP must be an integer, got {raw!r}") from None
    if value < 1:
        raise InputError("RESLOC_MAX_EXP must be positive")
    return value


# -- output ------------------------------------------------------------------------


def exact(x: GaussianRational) -> str:
    return str(x)


def emit(obj, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")
        return
    rounded = []
    for line in _table_lines(obj, "", rounded):
        out.write(line + "\n")
    if rounded:
        out.write("(~ marks values rounded for display)\n")


def _table_lines(obj, prefix: str, rounded: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}.{k}" if prefix else str(k)
            if isinstance(v, (dict, list)) and not _is_scalar_list(v):
                yield from _table_lines(v, key, rounded)
            else:
                yield f"{key:<32} {_cell(v, rounded)}"
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _table_lines(v, f"{prefix}[{i}]", rounded)
    else:
        yield f"{prefix:<32} {_cell(obj, rounded)}"


def _is_scalar_list(v) -> bool:
    # flat lists, or lists of flat lists, print on one line
    return isinstance(v, list) and all(
        not isinstance(x, dict) and (not isinstance(x, list) or _is_scalar_list(x)) for x in v
    )


def _cell(v, rounded: list) -> str:
    if isinstance(v, float):
        rounded.append(v)
        return f"~{v:.6g}"
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x, rounded) for x in v) + "]"
    return str(v)


# -- input helpers -----------------------------------------------------------------


def load_json_arg(text: str | None, path: str | None):
    if text is not None:
        return json.loads(text)
    if path is None or path == "-":
        return json.loads(sys.stdin.read())
    return json.loads(Path(path).read_text(encoding="utf-8"))


def problem_from_json(obj) -> tuple:
    if not isinstance(obj, dict) or "h" not in obj or "f" not in obj:
        raise InputError('problem JSON needs keys "h" and "f"')
    f_raw = obj["f"]
    if not isinstance(f_raw, list) or not f_raw:
        raise InputError('"f" must be a non-empty list')
    n = len(f_raw)
    f = tuple(as_poly(g, n) for g in f_raw)
    h = as_poly(obj["h"], n)
    cert = None
    if obj.get("certificate") is not None:
        cert = MembershipCertificate.from_json(obj["certificate"], n)
        if not verify_certificate(cert, f):
            raise InputError("supplied certificate does not verify against f")
    return ResidueProblem(h, f), cert


def field_from_args(args):
    chosen = [x for x in (args.maxdeg, args.diag, args.A, args.chart_fields, args.field) if x is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --maxdeg, --diag, --A, --chart-fields, --field")
    if args.field is not None:
        text = args.field
        obj = json.loads(text if text.lstrip().startswith("{") else Path(text).read_text(encoding="utf-8"))
        if "A" in obj:
            return matrix_field(obj["A"])
        if "chart_fields" in obj:
            return chart_fields(obj["chart_fields"])
        raise InputError('field JSON needs "A" or "chart_fields"')
    if args.maxdeg is not None:
        return max_degenerate_field(args.maxdeg)
    if args.diag is not None:
        entries = [GaussianRational.parse(t.strip()) for t in args.diag.split(",")]
        return ProjectiveVectorField.diagonal(entries)
    if args.A is not None:
        return matrix_field(json.loads(args.A))
    return chart_fields(json.loads(args.chart_fields))


def matrix_field(rows) -> ProjectiveVectorField:
    return ProjectiveVectorField(
        tuple(tuple(GaussianRational.from_json(x) for x in row) for row in rows)
    )


def chart_fields(obj) -> list:
    if isinstance(obj, dict):
        obj = [obj]
    fields = []
    for item in obj:
        comps = item["components"]
        n = len(comps)
        zeros = [tuple(GaussianRational.from_json(x) for x in z) for z in item.get("zeros", [])]
        fields.append(ChartField(int(item["chart"]), tuple(as_poly(c, n) for c in comps), tuple(zeros)))
    return fields


def field_n(field_) -> int:
    if isinstance(field_, list):
        return field_[0].n
    return field_.n


# -- commands ----------------------------------------------------------------------


def cmd_residue(args) -> int:
    prob, cert = problem_from_json(load_json_arg(args.json, args.file))
    r = solve_residue(prob, cert=cert, max_exponent=args.max_exponent)
    out = {
        "residue": r.value.to_json(),
        "value": exact(r.value),
        "method": r.method,
        "alpha": list(r.alpha),
    }
    if args.show_certificate and r.certificate is not None:
        out["certificate"] = r.certificate.to_json()
    emit(out, args.format)
    return EXIT_OK


def cmd_fm(args) -> int:
    field_ = field_from_args(args)
    n = field_n(field_)
    phi = parse_phi(args.phi, n)
    res = futaki_morita_detail(field_, phi, max_exponent=args.max_exponent)
    out = {
        "n": n,
        "k": res.k,
        "phi": {"label": phi.label, **phi.to_json()},
        "f_phi": exact(res.f_phi),
        "residue_sum": exact(res.residue_sum),
        "per_zero": [
            {
                "chart": c.point.chart,
                "point": [exact(x) for x in c.point.homogeneous()],
                "kind": c.point.kind,
                "method": c.result.method,
                "alpha": list(c.result.alpha),
                "contribution": exact(c.value),
            }
            for c in res.per_zero
        ],
    }
    if args.maxdeg is not None:
        closed = closed_form_max_degenerate(n, phi)
        out["cross_check"] = {"closed_form": exact(closed), "agrees": closed == res.f_phi}
        if closed != res.f_phi:
            emit(out, args.format)
            raise InvariantViolation("closed form disagrees with the certificate route")
    emit(out, args.format)
    return EXIT_OK


def cmd_futaki(args) -> int:
    field_ = field_from_args(args)
    n = field_n(field_)
    a, b = futaki(field_, max_exponent=args.max_exponent)
    emit({
        "n": n,
        f"tr(A^{n + 1})": exact(a),
        f"tr^{n + 1}": exact(b),
        "agree": a == b,
    }, args.format)
    return EXIT_OK


def cmd_chern(args) -> int:
    field_ = field_from_args(args)
    n = field_n(field_)
    numbers = chern_numbers(field_, max_exponent=args.max_exponent)
    emit({
        "n": n,
        "chern_numbers": {chern_spec(lam).label: exact(v) for lam, v in numbers.items()},
    }, args.format)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import QuadratureSpec, residue_numeric

    texts = [args.h] + list(args.f)
    n = len(args.f)
    if n == 0:
        raise InputError("give at least one --f")
    nv = max(n, infer_nvars(texts))
    if nv != n:
        raise InputError(f"{n} components of f but polynomials use {nv} variables")
    prob = ResidueProblem(parse_poly(args.h, n), tuple(parse_poly(t, n) for t in args.f))
    r = residue_numeric(prob, QuadratureSpec(radius=args.radius, nodes_per_angle=args.nodes))
    emit(r.to_json(), args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    if args.format == "table":
        def report(crit, check):
            print(f"[{crit}] {check.line()}", flush=True)
    else:
        report = None
    results = run_checks(n_max=args.n_max, with_oracle=args.with_oracle, seed=args.seed, report=report)
    ok = all(c.passed for _, c in results)
    if args.format == "json":
        emit({
            "passed": ok,
            "checks": [
                {"criterion": crit, "name": c.name, "passed": c.passed, "detail": c.detail}
                for crit, c in results
            ],
        }, "json")
    else:
        failed = sum(not c.passed for _, c in results)
        print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_INTERNAL


# -- parser ------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _add_field_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("vector field (choose one)")
    g.add_argument("--maxdeg", type=_positive_int, metavar="N",
                   help="maximally degenerate (Jordan block) field on CP^N")
    g.add_argument("--diag", metavar="A0,A1,...", help="diagonal traceless matrix entries")
    g.add_argument("--A", metavar="JSON", help="full traceless matrix as a JSON list of rows")
    g.add_argument("--chart-fields", metavar="JSON",
                   help='[{"chart": c, "components": [...], "zeros": [[...], ...]}, ...]')
    g.add_argument("--field", metavar="JSON|PATH",
                   help='{"A": [[...]]} or {"chart_fields": [...]}, inline or as a file')


def _add_common(p: argparse.ArgumentParser, fmt: str = "json") -> None:
    p.add_argument("--format", choices=("json", "table"), default=fmt)
    p.add_argument("--max-exponent", type=_positive_int, default=None,
                   help="certificate exponent cap (default: $RESLOC_MAX_EXP or %d)" % DEFAULT_MAX_EXPONENT)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residue", help="exact residue of h dz / f at the origin")
    _add_common(p)
    p.add_argument("file", nargs="?", help='problem JSON {"h", "f", "certificate"?}; "-" for stdin')
    p.add_argument("--json", help="inline problem JSON")
    p.add_argument("--show-certificate", action="store_true")
    p.set_defaults(run=cmd_residue)

    p = sub.add_parser("fm", help="localized invariant f_phi of a field on CP^n")
    _add_common(p)
    _add_field_options(p)
    p.add_argument("--phi", required=True, help='e.g. "det", "tr^3", "tr(A^3)", "tr*det", "c1*c2", or JSON')
    p.set_defaults(run=cmd_fm)

    p = sub.add_parser("futaki", help="Futaki invariant, both trace variants")
    _add_common(p)
    _add_field_options(p)
    p.set_defaults(run=cmd_futaki)

    p = sub.add_parser("chern", help="all Chern numbers of CP^n via localization")
    _add_common(p)
    _add_field_options(p)
    p.set_defaults(run=cmd_chern)

    p = sub.add_parser("oracle", help="numerical Bochner-Martinelli residue (n <= 2)")
    _add_common(p)
    p.add_argument("--h", required=True)
    p.add_argument("--f", action="append", default=[], required=True,
                   help="repeat once per component; write --f=-z1 for a leading minus")
    p.add_argument("--radius", type=_positive_float, default=0.5)
    p.add_argument("--nodes", type=_positive_int, default=64)
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("verify", help="run the reproduction suite")
    _add_common(p, "table")
    p.add_argument("--with-oracle", action="store_true")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.max_exponent is None:
            args.max_exponent = max_exponent_from_env()
        return args.run(args)
    except Exception as exc:  # noqa: BLE001 - mapped to documented exit codes
        code = exit_code_for(exc)
        print(f"resloc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
