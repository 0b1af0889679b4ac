"""Catalog of pure multiqubit states and the JSON state-file format."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

NORM_TOL = 1e-9


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if amps.size != 2 ** self.n_qubits:
            raise ValueError(f"expected {2 ** self.n_qubits} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(math.log2(amps.size)))
        return cls(n, amps)


@dataclass(frozen=True)
class GeneralizedSchmidt:
    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    phi: float = 0.0

    def __post_init__(self):
        lams = self.lambdas
        if any(v < 0 for v in lams):
            raise ValueError("Schmidt coefficients must be nonnegative")
        if abs(sum(v * v for v in lams) - 1) > NORM_TOL:
            raise ValueError("Schmidt coefficients must satisfy sum(lambda^2) = 1")
        if not 0 <= self.phi <= math.pi:
            raise ValueError("phi must lie in [0, pi]")

    @property
    def lambdas(self) -> tuple[float, ...]:
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3, self.lambda4)


# parameters used for the three-qubit worked example
EXAMPLE2 = GeneralizedSchmidt(
    lambda0=0.5,
    lambda1=math.sqrt(2) / 12,
    lambda2=math.sqrt(2) / 2,
    lambda3=math.sqrt(2) / 3,
    lambda4=math.sqrt(2) / 12,
)


def basis_index(bits: str) -> int:
    """Index of a computational basis ket, qubit 0 leftmost."""
    return int(bits, 2)


def w_state(n: int) -> StateVector:
    if n < 2:
        raise ValueError("W state needs n >= 2")
    amps = np.zeros(2 ** n, dtype=complex)
    for q in range(n):
        amps[1 << (n - 1 - q)] = 1 / math.sqrt(n)
    return StateVector(n, amps)


def ghz_state(n: int) -> StateVector:
    if n < 2:
        raise ValueError("GHZ state needs n >= 2")
    amps = np.zeros(2 ** n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(n, amps)


def generalized_schmidt_state(p: GeneralizedSchmidt) -> StateVector:
    amps = np.zeros(8, dtype=complex)
    amps[basis_index("000")] = p.lambda0
    amps[basis_index("100")] = p.lambda1 * np.exp(1j * p.phi)
    amps[basis_index("101")] = p.lambda2
    amps[basis_index("110")] = p.lambda3
    amps[basis_index("111")] = p.lambda4
    return StateVector(3, amps)


def haar_random_state(n: int, seed: int) -> StateVector:
    """Haar-distributed pure state, deterministic in (n, seed).

    Uses numpy's PCG64 generator; amplitudes are normalized complex Gaussians.
    """
    if not 2 <= n <= 5:
        raise ValueError("haar_random_state supports 2..5 qubits")
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal((2 ** n, 2)) @ np.array([1, 1j])
    return StateVector(n, z / np.linalg.norm(z))


def catalog_names() -> list[str]:
    names = [f"w{n}" for n in range(2, 6)] + [f"ghz{n}" for n in range(2, 6)]
    return names + ["example1", "example2"]


def catalog_state(name: str) -> StateVector:
    name = name.lower()
    if name == "example1":
        return w_state(4)
    if name == "example2":
        return generalized_schmidt_state(EXAMPLE2)
    for prefix, build in (("ghz", ghz_state), ("w", w_state)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            n = int(name[len(prefix):])
            if 2 <= n <= 5:
                return build(n)
    raise KeyError(f"unknown catalog state {name!r}; choose from {', '.join(catalog_names())}")


def dumps_state(psi: StateVector) -> str:
    doc = {
        "n_qubits": psi.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }
    return json.dumps(doc, indent=1)


def loads_state(text: str) -> StateVector:
    doc = json.loads(text)
    try:
        n = int(doc["n_qubits"])
        pairs = doc["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"state file is missing a field: {exc}") from None
    if any(len(p) != 2 for p in pairs):
        raise ValueError("amplitudes must be [re, im] pairs")
    amps = np.array([complex(re, im) for re, im in pairs])
    return StateVector(n, amps)


def save_state(psi: StateVector, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_state(psi) + "\n", encoding="utf-8")


def load_state(path: Union[str, Path]) -> StateVector:
    return loads_state(Path(path).read_text(encoding="utf-8"))
