"""Command-line interface.

Exit codes: 0 definite answer, 1 error (bad input or a failed check),
2 Unknown isomorphism verdict, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .cospectral import certify, search_counterexamples
from .cover import DEFAULT_ENUM_CAP, BudgetExceeded, CoverGraph, VoltageAssignment
from .example25 import check_ell as check_example_ell
from .example25 import verify_example25
from .field import FieldError, make_field
from .iso import DEFAULT_GI_CAP, UNKNOWN, cover_isomorphic, decide_isomorphism
from .paley import PaleyError, build_paley, paley_spectrum_closed_form
from .spectrum import DEFAULT_DENSE_CAP, CoverSpectrum, cospectral, full_spectrum, numeric_spectrum, reconstruct_voltage

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2
EXIT_BUDGET = 3


class CliError(Exception):
    pass


# -- input handling -----------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _modulus(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be comma-separated integers, got {text!r}") from None


def _field_from_args(args):
    if args.p is None:
        raise CliError("--p is required")
    return make_field(args.p, args.r, args.modulus)


def _read_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})") from exc


def _load_voltage(path: str, args) -> VoltageAssignment:
    obj = _read_json(path)
    try:
        v = VoltageAssignment.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed voltage file ({exc})") from exc
    if args.ell is not None and args.ell != v.ell:
        raise CliError(f"{path}: file has ell = {v.ell} but --ell {args.ell} was given")
    if args.p is not None:
        f = _field_from_args(args)
        if f != v.field:
            raise CliError(f"{path}: file field {v.field.descriptor()} differs from the command line")
    return v


def _load_pair(args) -> tuple[VoltageAssignment, VoltageAssignment]:
    if not args.alpha or not args.beta:
        raise CliError("--alpha and --beta are both required")
    a, b = _load_voltage(args.alpha, args), _load_voltage(args.beta, args)
    if a.field != b.field or a.ell != b.ell:
        raise CliError("alpha and beta files disagree on the field or ell")
    return a, b


def _require_format(args, allowed: tuple[str, ...]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise CliError(f"{args.command} does not support --format {fmt}")
    return fmt


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands ----------------------------------------------------------------------


def cmd_field_info(args) -> int:
    fmt = _require_format(args, ("json", "csv"))
    F = _field_from_args(args)
    build_paley(F)
    sq = F.squares
    units = [c for c in range(1, F.p) if F.square_mask[F.from_int(c).index]]
    orbits, seen = [], set()
    for s in sorted(int(x) for x in sq):
        if s in seen:
            continue
        orbit = sorted({int(F.smul(c, s)) for c in units})
        seen.update(orbit)
        orbits.append([F.format(x) for x in orbit])
    if fmt == "csv":
        rows = [[i, F.key(int(s)), F.format(int(s)), int(F.trace_table[s])] for i, s in enumerate(sq)]
        _emit(args, _csv(rows, ["even_power", "key", "element", "trace"]))
        return EXIT_OK
    report = {
        "q": F.q,
        "p": F.p,
        "r": F.r,
        "modulus": list(F.modulus),
        "generator": F.format(F.generator.index),
        "squares": [F.format(int(s)) for s in sq],
        "square_orbits": orbits,
        "trace": {F.format(x): int(F.trace_table[x]) for x in range(F.q)},
    }
    _emit(args, _dump(report))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    fmt = _require_format(args, ("json", "csv"))
    if not args.alpha:
        raise CliError("--alpha is required")
    v = _load_voltage(args.alpha, args)
    spec = full_spectrum(v)
    if fmt == "csv":
        F = v.field
        vals = spec.complex_values().real
        rows = [
            [F.key(a), k, f"{vals[a, k]:.12f}", " ".join(str(int(c)) for c in spec.coeffs[a, k].ravel())]
            for a in range(F.q)
            for k in range(v.ell)
        ]
        _emit(args, _csv(rows, ["a", "k", "value", "exact_coeffs"]))
    else:
        _emit(args, _dump(spec.to_json()))
    return EXIT_OK


def cmd_cospectral(args) -> int:
    _require_format(args, ("json",))
    a, b = _load_pair(args)
    sa, sb = full_spectrum(a), full_spectrum(b)
    same = cospectral(sa, sb)
    report = {"cospectral": same, "digest_alpha": sa.digest(), "digest_beta": sb.digest(), "certificate": None}
    if same:
        f, checks = certify(a, b)
        if f is not None:
            report["certificate"] = {"f": f.to_json(), "checks": checks}
    _emit(args, _dump(report))
    return EXIT_OK


def cmd_isomorphic(args) -> int:
    _require_format(args, ("json",))
    a, b = _load_pair(args)
    verdict = decide_isomorphism(a, b, gi_cap=args.gi_cap)
    w = cover_isomorphic(a, b)
    report = verdict.to_json(a.field)
    report["cover_isomorphic"] = w is not None
    if w is not None:
        report["cover_witness"] = w.to_json(a.field)
    _emit(args, _dump(report))
    return EXIT_UNKNOWN if verdict.status == UNKNOWN else EXIT_OK


def cmd_reconstruct(args) -> int:
    _require_format(args, ("json",))
    if not args.alpha:
        raise CliError("--alpha is required (a voltage or a spectrum file)")
    obj = _read_json(args.alpha)
    if "eigenvalues" in obj:
        spec = CoverSpectrum.from_json(obj)
        original = None
    else:
        original = _load_voltage(args.alpha, args)
        spec = full_spectrum(original)
    v = reconstruct_voltage(spec, k=1)
    report = {"voltage": v.to_json()}
    if original is not None:
        report["roundtrip"] = v == original
    _emit(args, _dump(report))
    return EXIT_OK


def cmd_search(args) -> int:
    fmt = _require_format(args, ("json", "csv"))
    F = _field_from_args(args)
    build_paley(F)
    if args.ell is None:
        raise CliError("--ell is required")
    report = search_counterexamples(
        F, args.ell, mode=args.mode, enum_cap=args.enum_cap, gi_cap=args.gi_cap, workers=args.workers
    )
    if fmt == "csv":
        rows = [
            [json.dumps(c.to_json()["alpha"], sort_keys=True), json.dumps(c.to_json()["beta"], sort_keys=True), c.verdict,
             c.certificate is not None]
            for c in report.counterexamples + report.undecided
        ]
        _emit(args, _csv(rows, ["alpha", "beta", "verdict", "certified"]))
    else:
        _emit(args, _dump(report.to_json(timing=args.timing)))
    return EXIT_UNKNOWN if report.undecided else EXIT_OK


def cmd_verify_example25(args) -> int:
    _require_format(args, ("json",))
    ell = 3 if args.ell is None else args.ell
    try:
        check_example_ell(ell)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    checks = verify_example25(ell)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
    sys.stderr.write("\n".join(lines) + "\n")
    _emit(args, _dump({"ell": ell, "checks": checks, "all_passed": all(checks.values())}))
    return EXIT_OK if all(checks.values()) else EXIT_ERROR


def cmd_export_dot(args) -> int:
    _require_format(args, ("dot",))
    if args.alpha:
        v = _load_voltage(args.alpha, args)
        cover = CoverGraph(v)
        if cover.n_vertices > args.dense_cap:
            raise CliError(f"{cover.n_vertices} vertices exceed the export cap {args.dense_cap}")
        _emit(args, cover.to_dot())
    else:
        F = _field_from_args(args)
        if F.q > args.dense_cap:
            raise CliError(f"{F.q} vertices exceed the export cap {args.dense_cap}")
        _emit(args, build_paley(F).to_dot())
    return EXIT_OK


def cmd_oracle_spectrum(args) -> int:
    fmt = _require_format(args, ("json", "csv"))
    if args.alpha:
        v = _load_voltage(args.alpha, args)
        numeric = numeric_spectrum(CoverGraph(v), cap=args.dense_cap)
        exact = full_spectrum(v).sorted_floats()
    else:
        F = _field_from_args(args)
        g = build_paley(F)
        if F.q > args.dense_cap:
            raise CliError(f"{F.q} vertices exceed the dense eigensolver cap {args.dense_cap}")
        numeric = np.linalg.eigvalsh(g.adjacency_matrix().astype(np.float64))
        exact = np.sort(np.concatenate([np.full(m, val) for _, val, m in paley_spectrum_closed_form(F)]))
    dev = float(np.abs(numeric - exact).max())
    if fmt == "csv":
        rows = [[i, f"{x:.12f}", f"{y:.12f}"] for i, (x, y) in enumerate(zip(numeric, exact))]
        _emit(args, _csv(rows, ["i", "numeric", "exact"]))
    else:
        _emit(args, _dump({"numeric": [float(x) for x in numeric], "max_deviation": dev}))
    return EXIT_OK


COMMANDS = {
    "field-info": cmd_field_info,
    "spectrum": cmd_spectrum,
    "cospectral": cmd_cospectral,
    "isomorphic": cmd_isomorphic,
    "reconstruct": cmd_reconstruct,
    "search": cmd_search,
    "verify-example25": cmd_verify_example25,
    "export-dot": cmd_export_dot,
    "oracle-spectrum": cmd_oracle_spectrum,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paleycover", description="Translation-invariant covers of Paley graphs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--r", type=int, default=1, help="degree of the extension")
    common.add_argument("--modulus", type=_modulus, help="monic modulus, constant term first, e.g. 3,0,1")
    common.add_argument("--ell", type=int, help="prime order of the voltage group")
    common.add_argument("--alpha", help="voltage (or spectrum) JSON file")
    common.add_argument("--beta", help="second voltage JSON file")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "dot"))
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--enum-cap", type=_positive, default=DEFAULT_ENUM_CAP)
    common.add_argument("--dense-cap", type=_positive, default=DEFAULT_DENSE_CAP)
    common.add_argument("--gi-cap", type=_positive, default=DEFAULT_GI_CAP)
    common.add_argument("--mode", choices=("exhaustive", "tau_guided"), default="exhaustive")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in search reports")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, FieldError, PaleyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
