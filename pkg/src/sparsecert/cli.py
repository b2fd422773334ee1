"""Command-line front end.

    sparsecert analyze MATRIX [--margin EPS]
    sparsecert oracle  MATRIX --smax K [--budget N]
    sparsecert recover MATRIX -s S -t T [--seed X]
    sparsecert verify  MATRIX --smax K
    sparsecert gen KIND N M [--seed X] [--normalize] [-o FILE]

MATRIX is a .csv or .mtx path; ``--generate KIND,N,M`` (with ``--seed`` and
``--normalize``) may replace it.  ``--format json`` switches the report to JSON.

Exit codes: 0 ok, 1 usage, 2 I/O or parse error, 3 budget exceeded,
4 recovery failures, 5 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import __version__, asf, bounds, lp, oracle
from .matrix import (
    FORMATS,
    GENERATOR_KINDS,
    GeneratorSpec,
    MatrixParseError,
    MatrixValueError,
    generate,
    read_matrix_file,
    save_matrix,
    format_for_path,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_BUDGET = 3
EXIT_RECOVERY = 4
EXIT_VIOLATION = 5

SEED_ENV = "SPARSECERT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ JSON


def _json_number(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _json_number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [to_json(v, indent, _level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(items) + "]"
        return "[\n" + ",\n".join(pad + it for it in items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ------------------------------------------------------------------ payloads


def profile_dict(profile: oracle.SparsityProfile) -> dict:
    return {
        "exact_sparsity_level": profile.level,
        "s_max": profile.s_max,
        "capped": profile.capped,
        "boundary": profile.boundary,
        "levels": [
            {
                "s": lv.s,
                "worst_margin": lv.worst.margin,
                "worst_support": list(lv.worst.support),
                "passes": lv.passes,
                "boundary": lv.boundary,
            }
            for lv in profile.levels
        ],
    }


def recovery_dict(stats: oracle.RecoveryStats) -> dict:
    return {
        "trials": stats.trials,
        "successes": stats.successes,
        "max_error": stats.max_error,
        "seed": stats.seed,
        "failures": stats.failures,
    }


def _render_analyze(report: bounds.BoundsReport, margin: float) -> str:
    d = report.to_dict()
    width = max(len(k) for k in d)
    lines = [f"{k:<{width}}  {_text_value(v)}" for k, v in d.items()]
    sv = report.scores
    threshold = asf.THRESHOLD - margin
    shown = min(sv.m, report.asf_bound + 3, 40)
    lines.append("")
    lines.append(f"sorted scores (threshold {threshold:.17g})")
    lines.append(f"{'k':>5}  {'column':>6}  {'nu':>20}  {'rho':>20}  {'prefix sum':>20}")
    for k, s in enumerate(asf.prefix_sums(sv, shown), start=1):
        j = int(sv.order[k - 1])
        mark = "  <- reaches threshold" if k == report.asf_bound + 1 else ""
        lines.append(f"{k:>5}  {j:>6}  {sv.nu[j]:>20.12g}  {sv.rho[j]:>20.12g}  {s:>20.12g}{mark}")
    if shown < sv.m:
        lines.append(f"  ... {sv.m - shown} more")
    return "\n".join(lines)


def _render_profile(p: dict) -> str:
    head = f"exact sparsity level: {p['exact_sparsity_level']}"
    if p["capped"]:
        head += f" (every level up to s_max={p['s_max']} passed; true level >= {p['s_max']})"
    if p["boundary"]:
        head += " (decided inside the rounding band, resolved downward)"
    lines = [head, f"{'s':>3}  {'worst margin':>20}  {'support':<20} verdict"]
    for lv in p["levels"]:
        verdict = "pass" if lv["passes"] else ("boundary" if lv["boundary"] else "fail")
        lines.append(
            f"{lv['s']:>3}  {lv['worst_margin']:>20.15g}  {str(lv['worst_support']):<20} {verdict}"
        )
    return "\n".join(lines)


def _text_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


# ------------------------------------------------------------------ plumbing


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _load_input(args) -> np.ndarray:
    if (args.matrix is None) == (args.generate is None):
        raise UsageError("give exactly one of MATRIX or --generate")
    if args.matrix is not None:
        return read_matrix_file(args.matrix, args.matrix_format)
    parts = args.generate.split(",")
    if len(parts) != 3:
        raise UsageError("--generate expects KIND,N,M")
    try:
        spec = GeneratorSpec(parts[0], int(parts[1]), int(parts[2]),
                             _seed(args), args.normalize)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return generate(spec)


def _seed(args) -> int:
    return _default_seed() if args.seed is None else args.seed


def _emit(args, text: str, payload) -> None:
    body = to_json(payload) if args.format == "json" else text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("matrix", nargs="?", help="matrix file (.csv or .mtx)")
    p.add_argument("--matrix-format", choices=FORMATS, default=None,
                   help="override format detection by extension")
    p.add_argument("--generate", metavar="KIND,N,M", help="generate the matrix instead of reading it")
    p.add_argument("--normalize", action="store_true", help="normalize generated columns")
    p.add_argument("--seed", type=int, default=None, help=f"seed (default ${SEED_ENV} or 0)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsecert", description="Sparsity-level certificates for l1 recovery.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="score-based, coherence and RIC sparsity bounds")
    _add_input(p)
    p.add_argument("--margin", type=float, default=0.0,
                   help="stop accumulating at 1/2 - EPS instead of 1/2")

    p = sub.add_parser("oracle", help="exact sparsity level by exhaustive NSP check")
    _add_input(p)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_LP_BUDGET, help="max LP solves")

    p = sub.add_parser("recover", help="planted-signal basis pursuit trials")
    _add_input(p)
    p.add_argument("-s", "--sparsity", type=int, required=True)
    p.add_argument("-t", "--trials", type=int, default=50)

    p = sub.add_parser("verify", help="check bounds against the exact oracle")
    _add_input(p)
    p.add_argument("--smax", type=int, required=True)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_LP_BUDGET, help="max LP solves")
    p.add_argument("--margin", type=float, default=0.0)

    p = sub.add_parser("gen", help="write a seeded test matrix")
    p.add_argument("kind", choices=GENERATOR_KINDS)
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--seed", type=int, default=None, help=f"seed (default ${SEED_ENV} or 0)")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--matrix-format", choices=FORMATS, default=None)
    p.add_argument("-o", "--output", help="output path (stdout if omitted)")
    return parser


# ------------------------------------------------------------------ commands


def _cmd_analyze(args) -> int:
    if args.margin < 0:
        raise UsageError("--margin must be non-negative")
    report = bounds.analyze(_load_input(args), args.margin)
    _emit(args, _render_analyze(report, args.margin), report.to_dict())
    return EXIT_OK


def _check_budget(args) -> None:
    if args.smax < 1:
        raise UsageError("--smax must be >= 1")
    if args.budget < 1:
        raise UsageError("--budget must be positive")


def _cmd_oracle(args) -> int:
    _check_budget(args)
    profile = oracle.nsp_profile(_load_input(args), args.smax, args.budget)
    payload = profile_dict(profile)
    _emit(args, _render_profile(payload), payload)
    return EXIT_OK


def _cmd_recover(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    A = _load_input(args)
    if not 0 <= args.sparsity <= A.shape[1]:
        raise UsageError(f"-s must lie in [0, {A.shape[1]}]")
    stats = oracle.recovery_trials(A, args.sparsity, args.trials, _seed(args))
    payload = recovery_dict(stats)
    text = (f"sparsity {args.sparsity}: {stats.successes}/{stats.trials} recovered "
            f"(max error {stats.max_error:.3g}, seed {stats.seed})")
    _emit(args, text, payload)
    return EXIT_OK if stats.all_succeeded else EXIT_RECOVERY


def _cmd_verify(args) -> int:
    _check_budget(args)
    A = _load_input(args)
    report = bounds.analyze(A, args.margin)
    profile = oracle.nsp_profile(A, args.smax, args.budget)
    violations = []
    if not profile.capped and report.asf_bound > profile.level:
        violations.append(
            f"score bound {report.asf_bound} exceeds exact sparsity level {profile.level}")
    if report.coherence_applies_as_given and report.asf_bound < report.coherence_bound:
        violations.append(
            f"score bound {report.asf_bound} below coherence bound {report.coherence_bound}")
    checks = []
    for s in range(2, min(args.smax, report.m) + 1):
        chk = oracle.theorem2_check(A, s)
        checks.append({"s": s, "lhs": chk.lhs, "rhs": chk.rhs, "holds": chk.holds})
        if not chk.holds:
            violations.append(f"eigenvalue ratio bound fails at s={s}: {chk.lhs} < {chk.rhs}")
    payload = {
        "bounds": report.to_dict(),
        "oracle": profile_dict(profile),
        "eigenvalue_ratio_checks": checks,
        "violations": violations,
        "passed": not violations,
    }
    lines = [
        f"score bound l* = {report.asf_bound}",
        _render_profile(payload["oracle"]),
        *(f"s={c['s']}: k_min/k_max = {c['lhs']:.12g} >= {c['rhs']:.12g}: {c['holds']}" for c in checks),
        "PASS" if not violations else "FAIL\n" + "\n".join("  " + v for v in violations),
    ]
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if not violations else EXIT_VIOLATION


def _cmd_gen(args) -> int:
    try:
        spec = GeneratorSpec(args.kind, args.n, args.m, _seed(args), args.normalize)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    A = generate(spec)
    fmt = args.matrix_format or (format_for_path(args.output) if args.output else "csv")
    text = save_matrix(A, fmt)
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "analyze": _cmd_analyze,
    "oracle": _cmd_oracle,
    "recover": _cmd_recover,
    "verify": _cmd_verify,
    "gen": _cmd_gen,
}


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"sparsecert: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, MatrixParseError, MatrixValueError) as exc:
        print(f"sparsecert: {exc}", file=sys.stderr)
        return EXIT_IO
    except oracle.BudgetExceeded as exc:
        print(f"sparsecert: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (asf.ScoreError, lp.LpError) as exc:
        # zero columns, m < 2, or a solver breakdown on this input
        print(f"sparsecert: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run())
