"""Monogamy lower bounds and polygamy upper bounds built from measure values.

Theorems 1-3 bound ``E^eta`` of the A|rest cut from below (``eta >= alpha``),
theorems 4-6 bound ``E_a^eta`` from above (``0 <= eta <= beta``).  Every
report also carries the weaker comparison bounds obtained by relaxing the
sharp coefficients, so the tightening can be measured.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional, Sequence

from .measures import MeasureVector
from .scalar import DomainError, coeff_step, mid_coefficient, mono_coefficients, poly_coefficients

COND_RTOL = 1e-9
GAP_TOL = 1e-9
CHAIN_SLACK = 1e-12

MONOGAMY_THEOREMS = (1, 2, 3)
POLYGAMY_THEOREMS = (4, 5, 6)


@dataclass(frozen=True)
class ExponentConfig:
    base_power: float
    eta: float

    def __post_init__(self):
        if not self.base_power > 0:
            raise DomainError(f"base power must be > 0, got {self.base_power}")
        if not self.eta >= 0 or not math.isfinite(self.eta):
            raise DomainError(f"eta must be a finite value >= 0, got {self.eta}")

    @property
    def t(self) -> float:
        return self.eta / self.base_power

    def require_monogamy(self) -> None:
        if self.eta < self.base_power:
            raise DomainError(f"monogamy bounds need eta >= {self.base_power}, got {self.eta}")

    def require_polygamy(self) -> None:
        if self.eta > self.base_power:
            raise DomainError(f"polygamy bounds need eta <= {self.base_power}, got {self.eta}")


@dataclass(frozen=True)
class PartitionConditions:
    gamma: float = 1.0
    gamma_prime: float = 1.0
    base_power: float = 2.0
    m: Optional[int] = None
    head: tuple[bool, ...] = ()
    tail: tuple[bool, ...] = ()
    satisfied: bool = True

    @property
    def k(self) -> float:
        return self.gamma ** self.base_power

    @property
    def k_prime(self) -> float:
        return self.gamma_prime ** self.base_power


@dataclass(frozen=True)
class BoundReport:
    theorem: int
    lhs: Optional[float]
    bound_new: float
    bound_chain_mid: float
    bound_chain_tail: float
    bound_poly_tail: Optional[float]
    conditions: PartitionConditions = field(default_factory=PartitionConditions)
    order: tuple[int, ...] = ()
    case: Optional[int] = None
    degenerate: bool = False
    alternate: Optional["BoundReport"] = None

    @property
    def monogamy(self) -> bool:
        return self.theorem in MONOGAMY_THEOREMS

    @property
    def gap(self) -> Optional[float]:
        if self.lhs is None:
            return None
        return self.lhs - self.bound_new if self.monogamy else self.bound_new - self.lhs

    @property
    def satisfied(self) -> bool:
        return self.conditions.satisfied

    @property
    def sound(self) -> bool:
        """True unless the conditions hold and the bound is violated."""
        return not self.satisfied or self.gap is None or self.gap >= -GAP_TOL

    def chain_ordered(self, slack: float = CHAIN_SLACK) -> bool:
        if self.monogamy:
            return (self.bound_new >= self.bound_chain_mid - slack
                    and self.bound_chain_mid >= self.bound_chain_tail - slack)
        return (self.bound_new <= self.bound_chain_mid + slack
                and self.bound_chain_mid <= self.bound_chain_tail + slack
                and self.bound_chain_tail <= self.bound_poly_tail + slack)


def _mpow(e: float, p: float) -> float:
    # a vanishing measure contributes nothing, even at p = 0
    if e == 0:
        return 0.0 if p >= 0 else math.inf
    return e ** p


def _cross(a: float, a_pow: float, b: float, b_pow: float) -> float:
    """a**a_pow * b**b_pow, taken as 0 whenever the a-factor vanishes."""
    if a == 0:
        return 0.0
    return a ** a_pow * _mpow(b, b_pow)


def _at_least(big: float, gamma: float, small: float) -> bool:
    return big >= gamma * small * (1 - COND_RTOL)


def _lhs(whole: Optional[float], eta: float) -> Optional[float]:
    return None if whole is None else _mpow(whole, eta)


def _sorted_desc(values: Sequence[float]) -> tuple[tuple[float, ...], tuple[int, ...]]:
    order = tuple(sorted(range(len(values)), key=lambda i: -values[i]))
    return tuple(values[i] for i in order), tuple(i + 1 for i in order)


def _check_n(mv: MeasureVector, n_min: int) -> None:
    if mv.n_parties < n_min:
        raise DomainError(f"need at least {n_min} parties, got {mv.n_parties}")


def _weighted_report(theorem: int, mv: MeasureVector, cfg: ExponentConfig) -> BoundReport:
    t, eta = cfg.t, cfg.eta
    e, order = _sorted_desc(mv.pairwise)
    powers = [_mpow(v, eta) for v in e]
    new = math.fsum(coeff_step(j, t) * p for j, p in enumerate(powers, start=1))
    rest = math.fsum(powers[1:])
    tail = powers[0] + (2 ** t - 1) * rest
    poly_tail = None if theorem == 1 else powers[0] + t * rest
    return BoundReport(
        theorem=theorem,
        lhs=_lhs(mv.one_to_rest, eta),
        bound_new=new,
        # without a ratio parameter the [(k+1)^t - k^t] form collapses to k = 1
        bound_chain_mid=tail,
        bound_chain_tail=tail,
        bound_poly_tail=poly_tail,
        conditions=PartitionConditions(base_power=cfg.base_power),
        order=order,
        degenerate=not any(mv.pairwise),
    )


def theorem1_bound(mv: MeasureVector, cfg: ExponentConfig) -> BoundReport:
    """Weighted-sum lower bound after sorting the pairwise values."""
    cfg.require_monogamy()
    _check_n(mv, 3)
    return _weighted_report(1, mv, cfg)


def theorem4_bound(mv: MeasureVector, cfg: ExponentConfig) -> BoundReport:
    """Weighted-sum upper bound on the assisted entanglement."""
    cfg.require_polygamy()
    _check_n(mv, 3)
    return _weighted_report(4, mv, cfg)


class GammaChoice(NamedTuple):
    gamma: Optional[float]
    swapped: bool = False
    degenerate: bool = False


def max_admissible_gamma(e1: float, e2: float) -> GammaChoice:
    """Largest gamma with e1 >= gamma * e2.

    ``gamma`` is ``inf`` when e2 = 0 < e1; when e1 < e2 the roles must be
    swapped and ``gamma`` is None.
    """
    if e1 < 0 or e2 < 0:
        raise DomainError("measure values must be nonnegative")
    if e1 == 0 and e2 == 0:
        return GammaChoice(None, degenerate=True)
    if e1 < e2:
        return GammaChoice(None, swapped=True)
    if e2 == 0:
        return GammaChoice(math.inf)
    return GammaChoice(e1 / e2)


def _pair_terms(big: float, small: float, cfg: ExponentConfig, k: float, monogamy: bool):
    t, eta, a = cfg.t, cfg.eta, cfg.base_power
    lin, power = mono_coefficients(k, t) if monogamy else poly_coefficients(k, t)
    p_big, p_small = _mpow(big, eta), _mpow(small, eta)
    new = p_big + lin * _cross(small, a, big, eta - a) + power * p_small
    mid = p_big + mid_coefficient(k, t) * p_small
    tail = p_big + (2 ** t - 1) * p_small
    poly_tail = None if monogamy else p_big + t * p_small
    return new, mid, tail, poly_tail


def _two_party(theorem: int, e1: float, e2: float, cfg: ExponentConfig, gamma: float,
               whole: Optional[float]) -> BoundReport:
    if not (gamma >= 1 and math.isfinite(gamma)):
        raise DomainError(f"gamma must be a finite value >= 1, got {gamma}")
    if e1 < 0 or e2 < 0:
        raise DomainError("measure values must be nonnegative")
    monogamy = theorem == 2
    k = gamma ** cfg.base_power
    case1 = _at_least(e1, gamma, e2)
    case2 = _at_least(e2, gamma, e1)

    def build(case: Optional[int], satisfied: bool) -> BoundReport:
        big, small = (e1, e2) if case == 1 else (e2, e1)
        new, mid, tail, poly_tail = _pair_terms(big, small, cfg, k, monogamy)
        cond = PartitionConditions(gamma=gamma, base_power=cfg.base_power,
                                   head=(satisfied,), satisfied=satisfied)
        return BoundReport(theorem, _lhs(whole, cfg.eta), new, mid, tail, poly_tail,
                           conditions=cond, order=(1, 2) if case == 1 else (2, 1),
                           case=case if satisfied else None,
                           degenerate=e1 == 0 and e2 == 0)

    if case1 and case2:
        return replace(build(1, True), alternate=build(2, True))
    if case1:
        return build(1, True)
    if case2:
        return build(2, True)
    # outside the admissible region: evaluate with the larger value leading
    return build(1 if e1 >= e2 else 2, False)


def theorem2_bound(e1: float, e2: float, cfg: ExponentConfig, gamma: float,
                   whole: Optional[float] = None) -> BoundReport:
    """Three-party lower bound using the ratio condition e1 >= gamma e2 (or swapped).

    ``whole`` is the A|B1B2 measure; when given, the report carries lhs and gap.
    """
    cfg.require_monogamy()
    return _two_party(2, e1, e2, cfg, gamma, whole)


def theorem5_bound(e1: float, e2: float, cfg: ExponentConfig, gamma: float,
                   whole: Optional[float] = None) -> BoundReport:
    """Three-party upper bound, dual of :func:`theorem2_bound`."""
    cfg.require_polygamy()
    return _two_party(5, e1, e2, cfg, gamma, whole)


def partition_flags(values: Sequence[float], gamma: float, gamma_prime: float,
                    m: int) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
    """Head flags for i = 1..m and tail flags for j = m+1..N-2 (1-based labels)."""
    e = list(values)
    suffix = [math.fsum(e[i + 1:]) for i in range(len(e))]
    head = tuple(_at_least(e[i], gamma, suffix[i]) for i in range(m))
    tail = tuple(_at_least(suffix[j], gamma_prime, e[j]) for j in range(m, len(e) - 1))
    return head, tail


def check_conditions(mv: MeasureVector, gamma: float, gamma_prime: float,
                     base_power: float = 2.0) -> PartitionConditions:
    """Find the largest partition index m whose head and tail conditions hold.

    When no m in 1..N-3 is admissible the flags for m = 1 are reported.
    """
    if gamma < 1 or gamma_prime < 1:
        raise DomainError("gamma and gamma' must be >= 1")
    n = mv.n_parties
    for m in range(n - 3, 0, -1):
        head, tail = partition_flags(mv.pairwise, gamma, gamma_prime, m)
        if all(head) and all(tail):
            return PartitionConditions(gamma, gamma_prime, base_power, m, head, tail, True)
    head, tail = partition_flags(mv.pairwise, gamma, gamma_prime, 1) if n >= 4 else ((), ())
    return PartitionConditions(gamma, gamma_prime, base_power, None, head, tail, False)


def _multi_party(theorem: int, mv: MeasureVector, cfg: ExponentConfig, gamma: float,
                 gamma_prime: float, m: int) -> BoundReport:
    _check_n(mv, 4)
    n = mv.n_parties
    if not 1 <= m <= n - 3:
        raise DomainError(f"partition index m must lie in 1..{n - 3}, got {m}")
    for g in (gamma, gamma_prime):
        if not (g >= 1 and math.isfinite(g)):
            raise DomainError(f"gamma values must be finite and >= 1, got {g}")
    monogamy = theorem == 3
    t, eta, a = cfg.t, cfg.eta, cfg.base_power
    k, kp = gamma ** a, gamma_prime ** a
    e = mv.pairwise
    p = [_mpow(v, eta) for v in e]
    e_pen, e_last = e[-2], e[-1]
    p_pen, p_last = p[-2], p[-1]
    middle = math.fsum(p[m:n - 3])
    head = p[:m]

    def assemble(c: float, c_prime: float, block: float) -> float:
        total = math.fsum(c ** i * v for i, v in enumerate(head))
        return total + c ** m * (c_prime * middle + block)

    lin, power = mono_coefficients(kp, t) if monogamy else poly_coefficients(kp, t)
    cross = _cross(e_pen, a, e_last, eta - a)
    c, cp = mid_coefficient(k, t), mid_coefficient(kp, t)
    new = assemble(c, cp, power * p_pen + lin * cross + p_last)
    mid = assemble(c, cp, cp * p_pen + p_last)
    weak = 2 ** t - 1
    tail = assemble(weak, weak, weak * p_pen + p_last)
    poly_tail = None if monogamy else assemble(t, t, t * p_pen + p_last)

    head_flags, tail_flags = partition_flags(e, gamma, gamma_prime, m)
    ok = all(head_flags) and all(tail_flags)
    cond = PartitionConditions(gamma, gamma_prime, a, m, head_flags, tail_flags, ok)
    return BoundReport(theorem, _lhs(mv.one_to_rest, eta), new, mid, tail, poly_tail,
                       conditions=cond, order=tuple(range(1, n)),
                       degenerate=not any(e))


def theorem3_bound(mv: MeasureVector, cfg: ExponentConfig, gamma: float,
                   gamma_prime: float, m: int) -> BoundReport:
    """N-party lower bound with a head block (ratio gamma) and tail block (gamma')."""
    cfg.require_monogamy()
    return _multi_party(3, mv, cfg, gamma, gamma_prime, m)


def theorem6_bound(mv: MeasureVector, cfg: ExponentConfig, gamma: float,
                   gamma_prime: float, m: int) -> BoundReport:
    cfg.require_polygamy()
    return _multi_party(6, mv, cfg, gamma, gamma_prime, m)


def _finite_min(ratios: Sequence[float]) -> float:
    finite = [r for r in ratios if math.isfinite(r)]
    return min(finite) if finite else 1.0


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.inf if num > 0 else 1.0
    return num / den


class Partition(NamedTuple):
    order: tuple[int, ...]  # 0-based indices into the pairwise list
    m: int
    gamma: float
    gamma_prime: float


def auto_partition(values: Sequence[float]) -> Optional[Partition]:
    """Relabeling, largest m and largest admissible (gamma, gamma') for theorems 3/6.

    Returns None when no relabeling admits any m with gamma, gamma' >= 1.
    """
    n = len(values) + 1
    if n < 4:
        return None
    best: Optional[Partition] = None
    for order in itertools.permutations(range(len(values))):
        e = [values[i] for i in order]
        suffix = [math.fsum(e[i + 1:]) for i in range(len(e))]
        for m in range(n - 3, 0, -1):
            if best is not None and m < best.m:
                break
            g = _finite_min([_ratio(e[i], suffix[i]) for i in range(m)])
            gp = _finite_min([_ratio(suffix[j], e[j]) for j in range(m, len(e) - 1)])
            if g < 1 or gp < 1:
                continue
            cand = Partition(order, m, g, gp)
            # prefer larger m, then the larger ratio parameters
            if best is None or (m, g, gp) > (best.m, best.gamma, best.gamma_prime):
                best = cand
            break
    return best


def auto_gamma(e1: float, e2: float) -> float:
    """Tightest finite gamma for the three-party theorems (1 if none is informative)."""
    choice = max_admissible_gamma(e1, e2)
    if choice.swapped:
        choice = max_admissible_gamma(e2, e1)
    g = choice.gamma
    if g is None or not math.isfinite(g):
        return 1.0
    return g


def evaluate(theorem: int, mv: MeasureVector, cfg: ExponentConfig,
             gamma: Optional[float] = None, gamma_prime: Optional[float] = None,
             m: Optional[int] = None) -> BoundReport:
    """Evaluate one theorem on a measure vector, auto-selecting missing parameters.

    Missing gamma for theorems 2/5 uses the largest admissible ratio.  For
    theorems 3/6 a missing m triggers a search over relabelings for the
    largest admissible m; missing gamma values then default to the largest
    admissible ones (or 1).
    """
    if theorem == 1:
        return theorem1_bound(mv, cfg)
    if theorem == 4:
        return theorem4_bound(mv, cfg)
    if theorem in (2, 5):
        if mv.n_parties != 3:
            raise DomainError(f"theorem {theorem} needs exactly 3 parties, got {mv.n_parties}")
        e1, e2 = mv.pairwise
        g = auto_gamma(e1, e2) if gamma is None else gamma
        fn = theorem2_bound if theorem == 2 else theorem5_bound
        return fn(e1, e2, cfg, g, whole=mv.one_to_rest)
    if theorem in (3, 6):
        _check_n(mv, 4)
        fn = theorem3_bound if theorem == 3 else theorem6_bound
        if m is not None:
            return fn(mv, cfg, 1.0 if gamma is None else gamma,
                      1.0 if gamma_prime is None else gamma_prime, m)
        if gamma is not None or gamma_prime is not None:
            g, gp = gamma or 1.0, gamma_prime or 1.0
            cond = check_conditions(mv, g, gp, cfg.base_power)
            return fn(mv, cfg, g, gp, cond.m or 1)
        part = auto_partition(mv.pairwise)
        if part is None:
            return fn(mv, cfg, 1.0, 1.0, 1)
        relabeled = MeasureVector(mv.one_to_rest, tuple(mv.pairwise[i] for i in part.order))
        rep = fn(relabeled, cfg, part.gamma, part.gamma_prime, part.m)
        return replace(rep, order=tuple(i + 1 for i in part.order))
    raise DomainError(f"unknown theorem {theorem}; expected 1..6")
