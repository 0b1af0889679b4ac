"""Command-line entry point.

Exit codes: 0 success (bounds sound), 1 usage/input error or a violated
bound, 2 theorem conditions unsatisfied.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bounds import BoundReport, DomainError, ExponentConfig, evaluate
from .experiments import (
    SweepSpec,
    example_checks,
    fmt,
    parse_floats,
    resolve_state,
    run_fuzz,
    sweep_csv,
)
from .measures import MeasureKind, measure_vector

log = logging.getLogger("entbounds")

EXIT_OK, EXIT_ERROR, EXIT_UNSATISFIED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for unmet conditions
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _add_state_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--catalog", help="catalog state: w2..w5, ghz2..ghz5, example1, example2")
    src.add_argument("--state", help="path to a JSON state file")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "csv", "structured"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entbounds", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("measure", help="concurrence or CoA of party 0 against the rest")
    _add_state_args(p)
    p.add_argument("--kind", default="concurrence", help="concurrence | assistance")
    _add_format(p)

    p = sub.add_parser("bounds", help="evaluate one theorem's bound on a state")
    _add_state_args(p)
    p.add_argument("--theorem", type=int, required=True, choices=range(1, 7))
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--base-power", type=float, default=2.0)
    p.add_argument("--kind", help="override the measure (default follows the theorem)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-prime", type=float)
    p.add_argument("--m", type=int, help="partition index for theorems 3/6 (default: auto)")
    _add_format(p)

    p = sub.add_parser("sweep", help="write bound curves over a grid of eta as CSV")
    _add_state_args(p)
    p.add_argument("--mode", choices=("monogamy", "polygamy"), required=True)
    p.add_argument("--base-power", type=float, default=2.0)
    p.add_argument("--k", type=float, default=2.0, help="ratio parameter k = gamma^base_power")
    p.add_argument("--eta-min", type=float)
    p.add_argument("--eta-max", type=float)
    p.add_argument("--steps", type=int, default=81)
    p.add_argument("--theorem", type=int, choices=range(1, 7))
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    p = sub.add_parser("fuzz", help="check the theorems on Haar-random states")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", default="concurrence")
    p.add_argument("--base-power", type=float, default=2.0)
    p.add_argument("--eta", default=None, help="comma-separated eta grid")
    p.add_argument("--out-dir", default="fuzz_violations")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("examples", help="recompute the worked-example values")
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _kind(text: str) -> MeasureKind:
    try:
        return MeasureKind.parse(text)
    except ValueError:
        raise UsageError(f"unknown measure kind {text!r}") from None


def _emit(fields: dict, fmt_name: str, out) -> None:
    if fmt_name == "structured":
        out.write(json.dumps(fields, indent=1) + "\n")
    elif fmt_name == "csv":
        out.write(",".join(fields) + "\n")
        out.write(",".join(_cell(v) for v in fields.values()) + "\n")
    else:
        width = max(len(k) for k in fields)
        for key, val in fields.items():
            out.write(f"{key:<{width}}  {_cell(val)}\n")


def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    if v is None:
        return ""
    return str(v)


def cmd_measure(args, out) -> int:
    psi = resolve_state(args.catalog, args.state)
    kind = _kind(args.kind)
    mv = measure_vector(psi, kind)
    fields = {"kind": kind.value, "n_qubits": psi.n_qubits, "one_to_rest": mv.one_to_rest}
    for i, v in enumerate(mv.pairwise, start=1):
        fields[f"pair_0_{i}"] = v
    _emit(fields, args.format, out)
    return EXIT_OK


def report_fields(rep: BoundReport) -> dict:
    c = rep.conditions
    fields = {
        "theorem": rep.theorem,
        "lhs": rep.lhs,
        "bound_new": rep.bound_new,
        "bound_chain_mid": rep.bound_chain_mid,
        "bound_chain_tail": rep.bound_chain_tail,
    }
    if rep.bound_poly_tail is not None:
        fields["bound_poly_tail"] = rep.bound_poly_tail
    fields.update({
        "gap": rep.gap,
        "conditions_ok": c.satisfied,
        "gamma": c.gamma,
        "gamma_prime": c.gamma_prime,
        "m": c.m,
        "head_flags": "".join("1" if f else "0" for f in c.head),
        "tail_flags": "".join("1" if f else "0" for f in c.tail),
        "order": " ".join(str(i) for i in rep.order),
        "case": rep.case,
        "degenerate": rep.degenerate,
    })
    if not c.satisfied:
        fields["status"] = "not applicable (conditions unsatisfied)"
    elif rep.sound:
        fields["status"] = "bound holds"
    else:
        fields["status"] = "VIOLATED"
    return fields


def cmd_bounds(args, out) -> int:
    psi = resolve_state(args.catalog, args.state)
    kind = _kind(args.kind) if args.kind else (
        MeasureKind.CONCURRENCE if args.theorem <= 3 else MeasureKind.ASSISTANCE)
    mv = measure_vector(psi, kind)
    cfg = ExponentConfig(args.base_power, args.eta)
    rep = evaluate(args.theorem, mv, cfg, args.gamma, args.gamma_prime, args.m)
    fields = report_fields(rep)
    if rep.alternate is not None:
        # equal pair values satisfy both role assignments; show the other one too
        alt = report_fields(rep.alternate)
        fields.update({f"alt_{k}": alt[k] for k in ("case", "bound_new", "gap")})
    _emit(fields, args.format, out)
    if not rep.satisfied:
        return EXIT_UNSATISFIED
    return EXIT_OK if rep.sound else EXIT_ERROR


def cmd_sweep(args, out) -> int:
    psi = resolve_state(args.catalog, args.state)
    spec = SweepSpec(args.mode, args.base_power, args.k, args.eta_min, args.eta_max, args.steps)
    text = sweep_csv(psi, spec, args.theorem)
    if args.out == "-":
        out.write(text)
    else:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
        log.info("wrote %d rows to %s", args.steps, args.out)
    return EXIT_OK


def cmd_fuzz(args, out) -> int:
    kind = _kind(args.kind)
    if args.eta is None:
        ts = [1.0, 1.25, 1.5, 2.0] if kind.is_monogamy else [0.25, 0.5, 0.75, 1.0]
        etas = [t * args.base_power for t in ts]
    else:
        etas = parse_floats(args.eta)
    res = run_fuzz(args.n, args.trials, args.seed, kind, etas, args.base_power,
                   out_dir=Path(args.out_dir), workers=args.workers)
    out.write(f"n={args.n} trials={args.trials} seed={args.seed} kind={kind.value} "
              f"eta={','.join(fmt(e) for e in etas)}\n")
    out.write(f"{'theorem':>7} {'evaluated':>9} {'satisfied':>9} {'violations':>10} {'worst_gap':>14}\n")
    for th, t in sorted(res.tallies.items()):
        worst = fmt(t.worst_gap) if math.isfinite(t.worst_gap) else "n/a"
        out.write(f"{th:>7} {t.evaluated:>9} {t.satisfied:>9} {t.violations:>10} {worst:>14}\n")
    out.write(f"violations: {res.violations}\n")
    for path in res.written:
        out.write(f"wrote {path}\n")
    return EXIT_ERROR if res.violations else EXIT_OK


def cmd_examples(args, out) -> int:
    checks = example_checks(args.tol)
    width = max(len(c.name) for c in checks)
    out.write(f"{'quantity':<{width}}  {'computed':>18}  {'expected':>18}  {'abs err':>9}  result\n")
    for c in checks:
        out.write(f"{c.name:<{width}}  {c.computed:>18.15f}  {c.expected:>18.15f}  "
                  f"{c.error:>9.1e}  {'PASS' if c.passed else 'FAIL'}\n")
    n_fail = sum(not c.passed for c in checks)
    out.write(f"{len(checks) - n_fail}/{len(checks)} passed\n")
    return EXIT_OK if n_fail == 0 else EXIT_ERROR


COMMANDS = {
    "measure": cmd_measure,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "fuzz": cmd_fuzz,
    "examples": cmd_examples,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, DomainError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"entbounds {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
