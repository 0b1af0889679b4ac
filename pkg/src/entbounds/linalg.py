"""Small dense complex linear algebra for few-qubit systems.

Qubit 0 is the leftmost tensor factor and basis states are ordered
big-endian, so ``|1000>`` is index 8 for four qubits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = _as_matrix(h)
    return h.shape[0] == h.shape[1] and bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix on qubit subsystems.

    ``factor`` optionally holds F with matrix == F @ F^dagger; it is attached
    by :func:`reduced_state` so spectra can be taken from the state vector
    directly instead of from an eigendecomposition of ``matrix``.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray
    factor: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        side = int(np.prod(dims))
        if m.shape != (side, side):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if any(d != 2 for d in dims):
            raise ValueError("only qubit subsystems are supported")
        if not is_hermitian(m):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {np.trace(m).real}, not 1")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return len(self.dims)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        m = _as_matrix(matrix)
        n = int(round(np.log2(m.shape[0])))
        return cls((2,) * n, m)

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).reshape(-1)
        n = int(round(np.log2(v.size)))
        return cls((2,) * n, np.outer(v, v.conj()), factor=v.reshape(-1, 1))


def tensor(*mats) -> np.ndarray:
    """Kronecker product of the arguments, left factor outermost."""
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def _check_keep(keep: Iterable[int], n: int) -> list[int]:
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("must keep at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"subsystem indices {keep} out of range for {n} qubits")
    return keep


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on ``keep``, subsystems kept in their original order."""
    n = rho.n_qubits
    keep = _check_keep(keep, n)
    drop = [i for i in range(n) if i not in keep]
    if rho.factor is not None:
        return reduced_state(rho.factor, keep, n)
    t = rho.matrix.reshape((2,) * (2 * n))
    # move kept row/col axes first, then contract the dropped pairs
    perm = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(perm)
    dk, dd = 2 ** len(keep), 2 ** len(drop)
    t = t.reshape(dk, dd, dk, dd)
    red = np.einsum("ajbj->ab", t)
    return DensityMatrix((2,) * len(keep), red)


def reduced_state(psi, keep: Iterable[int], n: Optional[int] = None) -> DensityMatrix:
    """Reduced state of a pure state (or of F F^dagger for a factor F).

    ``psi`` is either a length-2**n vector or a (2**n, r) factor matrix.
    """
    f = np.asarray(psi, dtype=complex)
    if f.ndim == 1:
        f = f.reshape(-1, 1)
    if n is None:
        n = int(round(np.log2(f.shape[0])))
    keep = _check_keep(keep, n)
    drop = [i for i in range(n) if i not in keep]
    r = f.shape[1]
    t = f.reshape((2,) * n + (r,)).transpose(keep + drop + [n])
    fac = t.reshape(2 ** len(keep), 2 ** len(drop) * r)
    return DensityMatrix((2,) * len(keep), fac @ fac.conj().T, factor=fac)


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""
    h = _as_matrix(h)
    if not is_hermitian(h):
        raise ValueError("matrix is not Hermitian")
    h = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(rho) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues within -1e-10 of zero are clamped."""
    w, v = hermitian_eig(rho)
    if w.size and w[-1] < -PSD_TOL:
        raise ValueError(f"matrix is not PSD (eigenvalue {w[-1]})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def ensemble(rho: DensityMatrix) -> np.ndarray:
    """Columns whose outer-product sum is ``rho`` (a factor F with rho = F F^dagger)."""
    if rho.factor is not None:
        return rho.factor
    w, v = hermitian_eig(rho.matrix)
    if w[-1] < -PSD_TOL:
        raise ValueError("matrix is not PSD")
    # numerical-rank cutoff; eigenvalues this small only inject noise into spectra
    keep = w > 1e-14
    return v[:, keep] * np.sqrt(w[keep])
