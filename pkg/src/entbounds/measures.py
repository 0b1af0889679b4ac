"""Concurrence, concurrence of assistance and a convex-roof search oracle."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .linalg import DensityMatrix, ensemble, reduced_state
from .states import StateVector

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y).real  # real antidiagonal (-1, 1, 1, -1)

CLAMP_TOL = 1e-10


class MeasureKind(enum.Enum):
    CONCURRENCE = "concurrence"
    ASSISTANCE = "assistance"

    @property
    def default_power(self) -> float:
        # squared concurrence is monogamous and squared CoA polygamous on qubits
        return 2.0

    @property
    def is_monogamy(self) -> bool:
        return self is MeasureKind.CONCURRENCE

    @classmethod
    def parse(cls, text: Union[str, "MeasureKind"]) -> "MeasureKind":
        if isinstance(text, cls):
            return text
        aliases = {"c": "concurrence", "ca": "assistance", "coa": "assistance"}
        return cls(aliases.get(text.lower(), text.lower()))


@dataclass(frozen=True)
class MeasureVector:
    """Measure across the A|rest cut plus each A|B_i pair, in label order."""

    one_to_rest: float
    pairwise: tuple[float, ...]

    def __post_init__(self):
        pw = tuple(float(v) for v in self.pairwise)
        if self.one_to_rest < 0 or any(v < 0 for v in pw):
            raise ValueError("measure values must be nonnegative")
        object.__setattr__(self, "pairwise", pw)
        object.__setattr__(self, "one_to_rest", float(self.one_to_rest))

    @property
    def n_parties(self) -> int:
        return len(self.pairwise) + 1


def _clamp(v: float) -> float:
    if -CLAMP_TOL <= v < 0:
        return 0.0
    return v


def pure_bipartite_concurrence(psi: StateVector, side_a: Iterable[int]) -> float:
    """sqrt(2 (1 - tr rho_A^2)) for the cut ``side_a`` | rest."""
    side_a = set(side_a)
    if not side_a or len(side_a) >= psi.n_qubits:
        raise ValueError("side_a must be a proper nonempty subset of the qubits")
    rho_a = reduced_state(psi.amplitudes, side_a, psi.n_qubits).matrix
    purity = float(np.real(np.vdot(rho_a, rho_a)))
    return math.sqrt(max(0.0, 2 * (1 - purity)))


def _check_two_qubit(rho: DensityMatrix) -> None:
    if not isinstance(rho, DensityMatrix):
        raise TypeError("expected a DensityMatrix")
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho.dims}")


def spin_flip(rho: DensityMatrix) -> DensityMatrix:
    _check_two_qubit(rho)
    return DensityMatrix((2, 2), YY @ rho.matrix.conj() @ YY)


def spin_flip_spectrum(rho: DensityMatrix) -> np.ndarray:
    """The four decreasing lambdas (square roots of the spectrum of rho rho~).

    With rho = F F^dagger the nonzero lambdas are the singular values of
    F^T (sy x sy) F, so no square root of a near-zero eigenvalue is taken.
    """
    _check_two_qubit(rho)
    f = ensemble(rho)
    s = np.linalg.svd(f.T @ YY @ f, compute_uv=False)
    lam = np.zeros(4)
    n = min(4, s.size)
    lam[:n] = s[:n]
    return lam


def wootters_concurrence(rho: DensityMatrix) -> float:
    lam = spin_flip_spectrum(rho)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_of_assistance(rho: DensityMatrix) -> float:
    return _clamp(float(spin_flip_spectrum(rho).sum()))


def measure_vector(psi: StateVector, kind: Union[MeasureKind, str]) -> MeasureVector:
    """Measure values of party 0 against the rest and against every other qubit."""
    kind = MeasureKind.parse(kind)
    n = psi.n_qubits
    if n < 3:
        raise ValueError("need at least three qubits")
    pair_fn = wootters_concurrence if kind is MeasureKind.CONCURRENCE else concurrence_of_assistance
    # for a pure state E_a across A|rest coincides with the concurrence
    whole = pure_bipartite_concurrence(psi, {0})
    pairs = tuple(pair_fn(reduced_state(psi.amplitudes, (0, i), n)) for i in range(1, n))
    return MeasureVector(whole, pairs)


def tangle_three_qubit(psi: StateVector) -> float:
    if psi.n_qubits != 3:
        raise ValueError("three-tangle needs exactly three qubits")
    c_whole = pure_bipartite_concurrence(psi, {0})
    c_ab = wootters_concurrence(reduced_state(psi.amplitudes, (0, 1), 3))
    c_ac = wootters_concurrence(reduced_state(psi.amplitudes, (0, 2), 3))
    return max(0.0, c_whole ** 2 - c_ab ** 2 - c_ac ** 2)


def _haar_isometries(rng: np.random.Generator, batch: int, n: int, r: int) -> np.ndarray:
    z = rng.standard_normal((batch, n, r)) + 1j * rng.standard_normal((batch, n, r))
    q, rr = np.linalg.qr(z)
    # fix the column phases so the distribution is Haar, not QR-biased
    d = np.diagonal(rr, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _retract(u: np.ndarray) -> np.ndarray:
    q, rr = np.linalg.qr(u)
    d = np.diagonal(rr, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def _decomposition_values(u: np.ndarray, psi: np.ndarray) -> np.ndarray:
    # members phi_i = sum_j u_ij psi_j; p_i C(phi_i / |phi_i|) = |phi_i^T YY phi_i|
    phi = u @ psi
    return np.abs(np.einsum("bni,ij,bnj->bn", phi, YY, phi)).sum(axis=1)


def convex_roof_oracle(
    rho: DensityMatrix,
    mode: str = "min",
    trials: int = 1000,
    seed: int = 0,
    batch: int = 250,
) -> float:
    """Best average pure-state concurrence over randomly sampled decompositions.

    Half the trial budget draws Haar-random isometries mixing the eigen-ensemble
    into decompositions of size r..2r; the rest refines the incumbent by small
    random isometric perturbations with a shrinking step.  ``mode="min"``
    approaches the concurrence from above, ``"max"`` the concurrence of
    assistance from below.
    """
    _check_two_qubit(rho)
    if mode not in ("min", "max"):
        raise ValueError("mode must be 'min' or 'max'")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sign = 1.0 if mode == "min" else -1.0
    psi = ensemble(rho).T  # rows are the unnormalized ensemble members
    r = psi.shape[0]
    rng = np.random.Generator(np.random.PCG64(seed))

    best, best_u = math.inf, None
    sizes = list(range(r, 2 * r + 1))
    n_global = max(1, trials // 2)
    done = 0
    while done < n_global:
        b = min(batch, n_global - done)
        n = sizes[(done // batch) % len(sizes)]
        u = _haar_isometries(rng, b, n, r)
        vals = sign * _decomposition_values(u, psi)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_u = float(vals[i]), u[i]
        done += b

    step = 0.3
    while done < trials:
        b = min(batch, trials - done)
        g = rng.standard_normal((b,) + best_u.shape) + 1j * rng.standard_normal((b,) + best_u.shape)
        u = _retract(best_u[None] + step * g)
        vals = sign * _decomposition_values(u, psi)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_u = float(vals[i]), u[i]
        else:
            step *= 0.5
        done += b
    return sign * best
