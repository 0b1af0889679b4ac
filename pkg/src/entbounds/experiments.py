"""Exponent sweeps, soundness fuzzing and the worked-example checks.

These are the data producers behind the CLI subcommands; they return plain
Python structures and never print.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import GAP_TOL, BoundReport, ExponentConfig, evaluate
from .measures import MeasureKind, measure_vector
from .states import StateVector, catalog_state, haar_random_state, load_state, save_state


@dataclass(frozen=True)
class SweepSpec:
    mode: str  # "monogamy" or "polygamy"
    base_power: float = 2.0
    k: float = 2.0
    eta_min: Optional[float] = None
    eta_max: Optional[float] = None
    steps: int = 81

    def __post_init__(self):
        if self.mode not in ("monogamy", "polygamy"):
            raise ValueError("mode must be 'monogamy' or 'polygamy'")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        lo, hi = self.grid_range
        if lo > hi:
            raise ValueError("eta_min must not exceed eta_max")
        if self.mode == "monogamy" and lo < self.base_power:
            raise ValueError(f"monogamy sweeps need eta_min >= {self.base_power}")
        if self.mode == "polygamy" and (hi > self.base_power or lo < 0):
            raise ValueError(f"polygamy sweeps need 0 <= eta <= {self.base_power}")

    @property
    def grid_range(self) -> tuple[float, float]:
        if self.mode == "monogamy":
            lo, hi = self.base_power, 3 * self.base_power
        else:
            lo, hi = 0.0, self.base_power
        return (lo if self.eta_min is None else self.eta_min,
                hi if self.eta_max is None else self.eta_max)

    @property
    def gamma(self) -> float:
        return self.k ** (1 / self.base_power)

    @property
    def kind(self) -> MeasureKind:
        return MeasureKind.CONCURRENCE if self.mode == "monogamy" else MeasureKind.ASSISTANCE

    def grid(self) -> np.ndarray:
        lo, hi = self.grid_range
        return np.linspace(lo, hi, self.steps)

    def default_theorem(self, n_qubits: int) -> int:
        if self.mode == "monogamy":
            return 2 if n_qubits == 3 else 1
        return 5 if n_qubits == 3 else 4


def sweep_reports(psi: StateVector, spec: SweepSpec,
                  theorem: Optional[int] = None) -> list[tuple[float, BoundReport]]:
    theorem = spec.default_theorem(psi.n_qubits) if theorem is None else theorem
    mono = theorem in (1, 2, 3)
    if mono != (spec.mode == "monogamy"):
        raise ValueError(f"theorem {theorem} does not match a {spec.mode} sweep")
    mv = measure_vector(psi, spec.kind)
    gamma = spec.gamma if theorem in (2, 3, 5, 6) else None
    gamma_prime = spec.gamma if theorem in (3, 6) else None
    out = []
    for eta in spec.grid():
        cfg = ExponentConfig(spec.base_power, float(eta))
        out.append((float(eta), evaluate(theorem, mv, cfg, gamma, gamma_prime)))
    return out


def sweep_header(spec: SweepSpec) -> list[str]:
    cols = ["eta", "lhs", "bound_new", "bound_chain_mid", "bound_chain_tail"]
    if spec.mode == "polygamy":
        cols.append("bound_poly_tail")
    return cols + ["conditions_ok"]


def fmt(v: float) -> str:
    return f"{v:.12g}"


def sweep_csv(psi: StateVector, spec: SweepSpec, theorem: Optional[int] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(sweep_header(spec))
    for eta, rep in sweep_reports(psi, spec, theorem):
        row = [eta, rep.lhs, rep.bound_new, rep.bound_chain_mid, rep.bound_chain_tail]
        if spec.mode == "polygamy":
            row.append(rep.bound_poly_tail)
        w.writerow([fmt(v) for v in row] + [int(rep.satisfied)])
    return buf.getvalue()


@dataclass
class TheoremTally:
    evaluated: int = 0
    satisfied: int = 0
    violations: int = 0
    worst_gap: float = math.inf

    def merge(self, other: "TheoremTally") -> None:
        self.evaluated += other.evaluated
        self.satisfied += other.satisfied
        self.violations += other.violations
        self.worst_gap = min(self.worst_gap, other.worst_gap)


@dataclass
class FuzzResult:
    tallies: dict[int, TheoremTally] = field(default_factory=dict)
    failing_seeds: list[int] = field(default_factory=list)
    written: list[Path] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(t.violations for t in self.tallies.values())

    @property
    def worst_gap(self) -> float:
        return min((t.worst_gap for t in self.tallies.values()), default=math.inf)


def theorems_for(kind: MeasureKind, n_qubits: int) -> tuple[int, ...]:
    first = 1 if kind is MeasureKind.CONCURRENCE else 4
    return (first, first + 1) if n_qubits == 3 else (first, first + 2)


def _fuzz_chunk(args) -> tuple[dict[int, TheoremTally], list[int]]:
    n, seeds, kind, etas, base_power = args
    kind = MeasureKind(kind)
    theorems = theorems_for(kind, n)
    tallies = {th: TheoremTally() for th in theorems}
    failing = []
    for seed in seeds:
        mv = measure_vector(haar_random_state(n, seed), kind)
        bad = False
        for th in theorems:
            for eta in etas:
                rep = evaluate(th, mv, ExponentConfig(base_power, eta))
                tally = tallies[th]
                tally.evaluated += 1
                if not rep.satisfied:
                    continue
                tally.satisfied += 1
                tally.worst_gap = min(tally.worst_gap, rep.gap)
                if rep.gap < -GAP_TOL:
                    tally.violations += 1
                    bad = True
        if bad:
            failing.append(seed)
    return tallies, failing


def run_fuzz(n: int, trials: int, seed: int, kind, etas: Sequence[float],
             base_power: float = 2.0, out_dir: Optional[Path] = None,
             workers: int = 1) -> FuzzResult:
    """Check every applicable theorem on ``trials`` Haar-random states.

    Trial i uses seed ``seed + i``, so results do not depend on ``workers``.
    States that violate a bound are written to ``out_dir`` when given.
    """
    if not 3 <= n <= 5:
        raise ValueError("fuzzing supports 3..5 qubits")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    kind = MeasureKind.parse(kind)
    etas = [float(e) for e in etas]
    for eta in etas:
        cfg = ExponentConfig(base_power, eta)
        if kind.is_monogamy:
            cfg.require_monogamy()
        else:
            cfg.require_polygamy()
    seeds = list(range(seed, seed + trials))
    n_chunks = max(1, min(trials, workers * 4))
    chunks = [(n, seeds[i::n_chunks], kind.value, etas, base_power) for i in range(n_chunks)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_fuzz_chunk, chunks))
    else:
        parts = [_fuzz_chunk(c) for c in chunks]
    result = FuzzResult()
    for tallies, failing in parts:
        for th, tally in tallies.items():
            result.tallies.setdefault(th, TheoremTally()).merge(tally)
        result.failing_seeds.extend(failing)
    result.failing_seeds.sort()
    if out_dir is not None and result.failing_seeds:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for s in result.failing_seeds:
            path = out_dir / f"violation_n{n}_seed{s}.json"
            save_state(haar_random_state(n, s), path)
            result.written.append(path)
    return result


@dataclass(frozen=True)
class ExampleCheck:
    name: str
    computed: float
    expected: float
    tol: float

    @property
    def error(self) -> float:
        return abs(self.computed - self.expected)

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


SATURATION_TOL = 1e-10


def example_checks(tol: float = 1e-9) -> list[ExampleCheck]:
    """Recompute the quoted values of both worked examples and W4 saturation gaps."""
    w4 = catalog_state("w4")
    ex2 = catalog_state("example2")
    w4_c = measure_vector(w4, MeasureKind.CONCURRENCE)
    w4_a = measure_vector(w4, MeasureKind.ASSISTANCE)
    ex2_c = measure_vector(ex2, MeasureKind.CONCURRENCE)
    ex2_a = measure_vector(ex2, MeasureKind.ASSISTANCE)
    s = math.sqrt
    checks = [
        ExampleCheck("W4 C(A|BCD)", w4_c.one_to_rest, s(3) / 2, tol),
        ExampleCheck("W4 C(AB)", w4_c.pairwise[0], 0.5, tol),
        ExampleCheck("W4 C(AC)", w4_c.pairwise[1], 0.5, tol),
        ExampleCheck("W4 C(AD)", w4_c.pairwise[2], 0.5, tol),
        ExampleCheck("W4 Ca(A|BCD)", w4_a.one_to_rest, s(3) / 2, tol),
        ExampleCheck("W4 Ca(AB)", w4_a.pairwise[0], 0.5, tol),
        ExampleCheck("W4 Ca(AC)", w4_a.pairwise[1], 0.5, tol),
        ExampleCheck("W4 Ca(AD)", w4_a.pairwise[2], 0.5, tol),
        ExampleCheck("Ex2 C(AB)", ex2_c.pairwise[0], s(2) / 3, tol),
        ExampleCheck("Ex2 C(AC)", ex2_c.pairwise[1], s(2) / 2, tol),
        ExampleCheck("Ex2 C(A|BC)", ex2_c.one_to_rest, s(106) / 12, tol),
        ExampleCheck("Ex2 Ca(A|BC)", ex2_a.one_to_rest, s(106) / 12, tol),
        ExampleCheck("Ex2 Ca(AB)", ex2_a.pairwise[0], s(34) / 12, tol),
        ExampleCheck("Ex2 Ca(AC)", ex2_a.pairwise[1], s(74) / 12, tol),
    ]
    for eta in (2.0, 3.0, 4.0):
        rep = evaluate(1, w4_c, ExponentConfig(2.0, eta))
        checks.append(ExampleCheck(f"W4 thm1 gap eta={eta:g}", rep.gap, 0.0, SATURATION_TOL))
    for eta in (0.5, 1.0, 2.0):
        rep = evaluate(4, w4_a, ExponentConfig(2.0, eta))
        checks.append(ExampleCheck(f"W4 thm4 gap eta={eta:g}", rep.gap, 0.0, SATURATION_TOL))
    return checks


def resolve_state(catalog: Optional[str], path: Optional[str]) -> StateVector:
    if (catalog is None) == (path is None):
        raise ValueError("give exactly one of --catalog or --state")
    if catalog is not None:
        return catalog_state(catalog)
    return load_state(path)


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}") from None

