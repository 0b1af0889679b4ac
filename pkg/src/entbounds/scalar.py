"""Scalar inequality kernels behind the monogamy/polygamy bounds.

Everything here is a pure function of floats.  The chain evaluators return
every member of an inequality chain so callers (and tests) can check the
ordering directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class DomainError(ValueError):
    """An argument lies outside the domain where a bound is defined."""


def _pow(x: float, mu: float) -> float:
    # 0**0 == 1 in Python, which is the convention wanted for mu = 0 chains.
    return x ** mu


@dataclass(frozen=True)
class ChainParams:
    k: float
    mu: float

    def __post_init__(self):
        if not math.isfinite(self.k) or self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")


@dataclass(frozen=True)
class WeightedCoefficients:
    t: float
    coeffs: tuple[float, ...]

    @classmethod
    def build(cls, n: int, t: float) -> "WeightedCoefficients":
        return cls(t, tuple(coeff_step(j, t) for j in range(1, n + 1)))


def coeff_step(j: int, t: float) -> float:
    """Return ``j**t - (j-1)**t``, the weight of the j-th largest term."""
    if j < 1:
        raise DomainError(f"coefficient index must be >= 1, got {j}")
    if not math.isfinite(t):
        raise DomainError(f"exponent must be finite, got {t}")
    if j == 1:
        return 1.0
    return float(j) ** t - float(j - 1) ** t


def _check_gap_domain(x: float, m: float) -> None:
    if m < 1 or x < m:
        raise DomainError(f"need x >= m >= 1, got x={x}, m={m}")


def lemma1_gap(x: float, m: float, mu: float) -> float:
    """(1+x)^mu - x^mu - (m+1)^mu + m^mu, nonnegative for x >= m >= 1, mu >= 1."""
    _check_gap_domain(x, m)
    if mu < 1:
        raise DomainError(f"need mu >= 1, got {mu}")
    return (1 + x) ** mu - x ** mu - (m + 1) ** mu + m ** mu


def lemma4_gap(x: float, m: float, mu: float) -> float:
    """x^mu + (m+1)^mu - m^mu - (1+x)^mu, nonnegative for x >= m >= 1, 0 <= mu <= 1."""
    _check_gap_domain(x, m)
    if not 0 <= mu <= 1:
        raise DomainError(f"need 0 <= mu <= 1, got {mu}")
    return x ** mu + (m + 1) ** mu - m ** mu - (1 + x) ** mu


def _weighted_sum(a: Sequence[float], mu: float) -> float:
    prev = math.inf
    for v in a:
        if v < 0:
            raise DomainError(f"entries must be nonnegative, got {v}")
        if v > prev:
            raise DomainError("entries must be sorted nonincreasing")
        prev = v
    return math.fsum(coeff_step(j, mu) * _pow(v, mu) for j, v in enumerate(a, start=1))


def weighted_power_lower(a: Sequence[float], mu: float) -> float:
    """Weighted power sum that lower-bounds ``sum(a)**mu`` when mu >= 1.

    ``a`` must already be sorted nonincreasing.
    """
    if mu < 1:
        raise DomainError(f"need mu >= 1, got {mu}")
    return _weighted_sum(a, mu)


def weighted_power_upper(a: Sequence[float], mu: float) -> float:
    """Same weighted sum, an upper bound on ``sum(a)**mu`` when 0 <= mu <= 1."""
    if not 0 <= mu <= 1:
        raise DomainError(f"need 0 <= mu <= 1, got {mu}")
    return _weighted_sum(a, mu)


def _check_x(params: ChainParams, x: float) -> None:
    # closed interval; the upper end is where the first chain members meet
    if not 0 <= x <= 1 / params.k:
        raise DomainError(f"x must lie in [0, 1/k] = [0, {1 / params.k}], got {x}")


def mono_coefficients(k: float, mu: float) -> tuple[float, float]:
    """Linear and power coefficients of the sharpest monogamy chain member."""
    lin = k * mu / (k + 1)
    power = (k + 1) ** mu - (1 + mu / (k + 1)) * k ** mu
    return lin, power


def poly_coefficients(k: float, mu: float) -> tuple[float, float]:
    """Linear and power coefficients of the sharpest polygamy chain member."""
    lin = k * k * mu / (k + 1) ** 2
    power = (k + 1) ** mu - (k * mu / (k + 1) ** 2 + 1) * k ** mu
    return lin, power


def mid_coefficient(k: float, mu: float) -> float:
    return (k + 1) ** mu - k ** mu


def mono_chain(params: ChainParams, x: float) -> tuple[float, float, float]:
    """Members (b1, b2, b3) of the lower chain under ``(1+x)**mu``.

    Valid for mu >= 1 and 0 <= x <= 1/k; then (1+x)^mu >= b1 >= b2 >= b3.
    """
    if params.mu < 1:
        raise DomainError(f"monogamy chain needs mu >= 1, got {params.mu}")
    _check_x(params, x)
    k, mu = params.k, params.mu
    xm = _pow(x, mu)
    lin, power = mono_coefficients(k, mu)
    b1 = 1 + lin * x + power * xm
    b2 = 1 + mid_coefficient(k, mu) * xm
    b3 = 1 + (2 ** mu - 1) * xm
    return b1, b2, b3


def poly_chain(params: ChainParams, x: float) -> tuple[float, float, float, float]:
    """Members (u1, u2, u3, u4) of the upper chain over ``(1+x)**mu``.

    Valid for 0 <= mu <= 1 and 0 <= x <= 1/k; then (1+x)^mu <= u1 <= ... <= u4.
    """
    if not 0 <= params.mu <= 1:
        raise DomainError(f"polygamy chain needs 0 <= mu <= 1, got {params.mu}")
    _check_x(params, x)
    k, mu = params.k, params.mu
    xm = _pow(x, mu)
    lin, power = poly_coefficients(k, mu)
    u1 = 1 + lin * x + power * xm
    u2 = 1 + mid_coefficient(k, mu) * xm
    u3 = 1 + (2 ** mu - 1) * xm
    u4 = 1 + mu * xm
    return u1, u2, u3, u4
