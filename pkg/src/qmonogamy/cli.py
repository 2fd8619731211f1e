"""
Command-line front end.

    qmono eval STATE [--focus A] [--measures ...] [--theorems ...] [--alpha ...]
    qmono fuzz --qubits N --count M --seed S [--theorems ...] [--alphas ...] --out FILE
    qmono figure --which {w-residuals,eoa-bound} [--alpha-min ...] --out FILE
    qmono classify STATE [--alpha-grid ...]

STATE is a named state (ghz3, w3, ghz_minus_w) or a JSON state file.
Exit codes: 0 pass/inconclusive, 1 usage or IO error, 2 violation.
"""

import argparse
import datetime as _dt
import json
import os
import sys
from typing import List

import numpy as np

from . import __version__
from .convexroof import RoofConfig
from .errors import DimensionError, RegimeError, SchemaError, ValidationError
from .fuzz import THEOREMS, default_workers, run_campaign, summary_lines
from .measures import (
    SQRT2,
    coa_2q,
    concurrence_pure,
    eof_2q,
    eof_pure,
    focus_split,
    pair_reduction,
    pairwise_concurrences,
    partners,
    residual_concurrence,
    residual_eof,
    three_tangle,
)
from .monogamy import (
    DEFAULT_ALPHAS,
    TOLERANCE_TABLE_VERSION,
    CSV_COLUMNS,
    MonogamyReport,
    check_ckw,
    check_dual_ckw,
    check_theorem1,
    check_theorem2,
    check_theorem4,
    check_theorem5,
    check_theorem6,
    classify_pure3,
    csv_row,
    eoa_bound,
)
from .states import named_state, resolve_state

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
MEASURE_NAMES = ("concurrence", "eof", "coa", "tangle", "residual")
EVAL_THEOREMS = ("ckw", "dual", "t1", "t2", "t4", "t5", "t6")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> List[float]:
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        out.append(SQRT2 if tok.lower() in ("sqrt2", "sqrt(2)") else float(tok))
    return out


def _names(text: str) -> List[str]:
    return [t for t in text.replace(" ", "").split(",") if t]


def manifest(argv, seed=None) -> dict:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (
        _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc)
        if epoch
        else _dt.datetime.now(_dt.timezone.utc)
    )
    return {
        "command": "qmono " + " ".join(argv),
        "seed": seed,
        "tolerance_table": TOLERANCE_TABLE_VERSION,
        "tool_version": __version__,
        "timestamp": when.replace(microsecond=0).isoformat(),
    }


def _manifest_lines(man: dict) -> List[str]:
    return [f"# {k}: {'' if v is None else v}" for k, v in man.items()]


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _measure_block(psi, a, names, alphas):
    out = {}
    split = focus_split(psi, a)
    others = partners(psi, a)
    if "concurrence" in names:
        out["concurrence"] = {
            "focus_split": concurrence_pure(psi, split),
            "pairs": {str(b): c for b, c in zip(others, pairwise_concurrences(psi, a))},
        }
    if "eof" in names:
        out["eof"] = {
            "focus_split": eof_pure(psi, split),
            "pairs": {str(b): eof_2q(pair_reduction(psi, a, b)) for b in others},
        }
    if "coa" in names:
        out["coa"] = {
            "pairs": {
                str(b): dict(zip(("value", "exact"), coa_2q(pair_reduction(psi, a, b))))
                for b in others
            }
        }
    if psi.n_qubits == 3:
        if "tangle" in names:
            out["tangle"] = three_tangle(psi, a)
        if "residual" in names:
            out["residual"] = {
                "concurrence": {
                    repr(x): {"value": residual_concurrence(psi, a, x, diagnostic=True),
                              "regime": x >= 2}
                    for x in alphas
                },
                "eof": {
                    repr(x): {"value": residual_eof(psi, a, x, diagnostic=True),
                              "regime": x >= SQRT2 - 1e-12}
                    for x in alphas
                },
            }
    return out


def _in_regime(theorem, alphas):
    ok = {
        "t1": lambda x: x >= 2,
        "t2": lambda x: x <= 0,
        "t4": lambda x: x >= SQRT2 - 1e-12,
        "t6": lambda x: x >= SQRT2 - 1e-12,
    }[theorem]
    return [x for x in alphas if ok(x)]


def cmd_eval(args, argv) -> int:
    psi = resolve_state(args.state)
    if not 0 <= args.focus < psi.n_qubits:
        raise UsageError(f"--focus {args.focus} out of range for {psi.n_qubits} qubits")
    names = _names(args.measures)
    for n in names:
        if n not in MEASURE_NAMES:
            raise UsageError(f"unknown measure '{n}'; choose from {', '.join(MEASURE_NAMES)}")
    theorems = _names(args.theorems)
    for t in theorems:
        if t not in EVAL_THEOREMS:
            raise UsageError(f"unknown theorem '{t}'; choose from {', '.join(EVAL_THEOREMS)}")
    alphas = _floats(args.alpha) if args.alpha else [2.0, 2.5, 3.0, 4.0]
    if psi.n_qubits < 2:
        raise UsageError("eval needs at least 2 qubits")

    a = args.focus
    cfg = RoofConfig(seed=args.seed, restarts=args.roof_restarts)
    results = []
    if psi.n_qubits >= 3:
        grid = lambda t: _in_regime(t, alphas) if args.alpha else DEFAULT_ALPHAS[t]  # noqa: E731
        for t in theorems:
            if t == "ckw":
                results.append(check_ckw(psi, a))
            elif t == "dual":
                results.append(check_dual_ckw(psi, a))
            elif t == "t5":
                results.append(check_theorem5(psi, a, cfg))
            elif t == "t6" and psi.n_qubits == 3 and grid("t6"):
                results.extend(check_theorem6(psi, a, grid("t6"), cfg))
            elif t in ("t1", "t2", "t4") and grid(t):
                fn = {"t1": check_theorem1, "t2": check_theorem2, "t4": check_theorem4}[t]
                results.extend(fn(psi, a, grid(t)))
    report = MonogamyReport(
        args.state, a, results, alphas, _measure_block(psi, a, names, alphas)
    )
    doc = {"manifest": manifest(argv, args.seed), **report.to_dict()}
    _write(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_VIOLATION if report.has_violation else EXIT_OK


def cmd_fuzz(args, argv) -> int:
    if not 3 <= args.qubits <= 5:
        raise UsageError("--qubits must be between 3 and 5")
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    theorems = _names(args.theorems)
    for t in theorems:
        if t not in THEOREMS:
            raise UsageError(f"unknown theorem '{t}'; choose from {', '.join(THEOREMS)}")
    alphas = None
    if args.alphas:
        grid = _floats(args.alphas)
        alphas = {t: grid for t in theorems if t in ("t1", "t2", "t4")}
    cfg = RoofConfig(seed=args.seed, restarts=args.roof_restarts)
    workers = args.workers or default_workers()
    try:
        campaign = run_campaign(args.qubits, args.count, args.seed, theorems, alphas, cfg, workers)
    except RegimeError as exc:
        raise UsageError(str(exc)) from None
    lines = _manifest_lines(manifest(argv, args.seed))
    lines.append(",".join(CSV_COLUMNS))
    lines.extend(csv_row(sid, r) for sid, r in campaign.rows)
    _write(args.out, "\n".join(lines) + "\n")
    for line in summary_lines(campaign):
        print(line, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_VIOLATION if campaign.has_violation else EXIT_OK


def figure_grid(lo, hi, points, anchors=()):
    grid = set(np.linspace(lo, hi, points).tolist())
    grid.update(x for x in anchors if lo <= x <= hi)
    return sorted(grid)


def cmd_figure(args, argv) -> int:
    lo = SQRT2 if args.alpha_min is None else args.alpha_min
    hi = args.alpha_max if args.alpha_max is not None else (6.0 if args.which == "w-residuals" else 4.0)
    if lo < SQRT2 - 1e-12:
        raise UsageError(f"--alpha-min must be >= sqrt(2) = {SQRT2:.12g}")
    if hi <= lo:
        raise UsageError("--alpha-max must exceed --alpha-min")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    lines = _manifest_lines(manifest(argv))
    if args.which == "w-residuals":
        psi = named_state("w3")
        lines.append("alpha,tau_concurrence,tau_eof")
        for x in figure_grid(lo, hi, args.points, anchors=(2.0,)):
            tc = f"{residual_concurrence(psi, 0, x):.12g}" if x >= 2.0 else ""
            lines.append(f"{x:.12g},{tc},{residual_eof(psi, 0, x):.12g}")
    else:
        psi = named_state("ghz_minus_w")
        lines.append("alpha,eoa_lower_bound")
        for x in figure_grid(lo, hi, args.points):
            lines.append(f"{x:.12g},{eoa_bound(psi, 0, 1, x):.12g}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_classify(args, argv) -> int:
    psi = resolve_state(args.state)
    if psi.n_qubits != 3:
        raise UsageError(f"classify needs a 3-qubit state, got {psi.n_qubits} qubits")
    grid = _floats(args.alpha_grid)
    try:
        cls = classify_pure3(psi, grid)
    except RegimeError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        doc = {
            "manifest": manifest(argv),
            "label": cls.label,
            "note": cls.note,
            "detected_alphas": cls.detected_alphas,
            "residuals": {str(q): {repr(x): v for x, v in row.items()} for q, row in cls.residuals.items()},
        }
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"label: {cls.label}" + (f" ({cls.note})" if cls.note else ""))
    print("focus  " + "  ".join(f"a={x:<10.6g}" for x in grid))
    for q, row in cls.residuals.items():
        print(f"{'ABC'[q]:<5}  " + "  ".join(f"{row[x]:<12.6g}" for x in grid))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmono", description="Qubit entanglement measures and monogamy checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate measures and monogamy checks on one state")
    e.add_argument("state")
    e.add_argument("--focus", type=int, default=0, help="qubit playing role A")
    e.add_argument("--measures", default=",".join(MEASURE_NAMES))
    e.add_argument("--theorems", default="ckw,dual,t1,t2,t4")
    e.add_argument("--alpha", default=None, help="comma-separated exponents (sqrt2 allowed)")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--roof-restarts", type=int, default=RoofConfig.restarts)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_eval)

    f = sub.add_parser("fuzz", help="check theorems on Haar-random states")
    f.add_argument("--qubits", type=int, default=3)
    f.add_argument("--count", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--theorems", default="t1")
    f.add_argument("--alphas", default=None)
    f.add_argument("--workers", type=int, default=None, help="default: $QMONO_WORKERS or CPU count")
    f.add_argument("--roof-restarts", type=int, default=RoofConfig.restarts)
    f.add_argument("--out", default=None)
    f.set_defaults(func=cmd_fuzz)

    g = sub.add_parser("figure", help="emit figure data as CSV")
    g.add_argument("--which", choices=("w-residuals", "eoa-bound"), required=True)
    g.add_argument("--alpha-min", type=float, default=None)
    g.add_argument("--alpha-max", type=float, default=None)
    g.add_argument("--points", type=int, default=101)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_figure)

    c = sub.add_parser("classify", help="classify a 3-qubit pure state")
    c.add_argument("state")
    c.add_argument("--alpha-grid", default="2,2.5,3,4,6")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help/--version exit 0, usage errors exit 1
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qmono: error: {exc}", file=sys.stderr)
    except (SchemaError, ValidationError, DimensionError, LookupError, OSError, ValueError) as exc:
        print(f"qmono: error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
