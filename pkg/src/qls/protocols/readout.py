"""Phase-sensitive readout of the control qubit.

Sequence: prepare |0>, Hadamard-like rotation ``H = exp(-i sigma_y pi/4)``,
reference phase ``exp(i xi sigma_z)``, conditional phase
``exp(i Phi_O sigma_z)``, ``H^dagger``, measure. The excitation probability
is ``sin^2(Phi_O + xi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["QubitState", "RamseyEstimate", "qls_sequence", "ramsey_run", "ramsey_sweep", "hadamard"]


@dataclass(frozen=True)
class QubitState:
    """Amplitudes on (|0>, |1>) = (down, up)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (2,):
            raise ValueError("a qubit state has two amplitudes")
        if abs(np.vdot(amp, amp).real - 1.0) > 1e-12:
            raise ValueError("qubit state must be normalized")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def ground(cls) -> "QubitState":
        return cls(np.array([1.0, 0.0], dtype=complex))

    def apply(self, u: np.ndarray) -> "QubitState":
        return QubitState(u @ self.amplitudes)

    @property
    def p_up(self) -> float:
        return float(abs(self.amplitudes[1]) ** 2)


def hadamard() -> np.ndarray:
    """``exp(-i sigma_y pi/4)``: maps |0> to an equal superposition."""
    c = s = math.sqrt(0.5)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _z_phase(angle: float) -> np.ndarray:
    return np.diag([np.exp(1j * angle), np.exp(-1j * angle)])


def qls_sequence(phi_O: float, xi: float) -> float:
    """Excitation probability of the control after the readout sequence."""
    h = hadamard()
    state = QubitState.ground().apply(h).apply(_z_phase(xi)).apply(_z_phase(phi_O)).apply(h.conj().T)
    return state.p_up


@dataclass(frozen=True)
class RamseyEstimate:
    estimate: float
    stderr: float
    successes: int
    shots: int
    p_true: float


def ramsey_run(phi_O: float, xi: float, shots: int, seed) -> RamseyEstimate:
    """Binomial sampling of ``shots`` repetitions with a generator seeded by ``seed``."""
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError("shots must be a positive integer")
    p = min(max(qls_sequence(phi_O, xi), 0.0), 1.0)
    rng = np.random.default_rng(seed)
    k = int(rng.binomial(int(shots), p))
    est = k / shots
    return RamseyEstimate(est, math.sqrt(est * (1.0 - est) / shots), k, int(shots), p)


def ramsey_sweep(values, sweep: str = "phi", fixed: float = 0.0, shots: int = 10, seed=0) -> list[tuple[float, RamseyEstimate]]:
    """Sweep ``Phi_O`` (``sweep="phi"``, with ``xi = fixed``) or ``xi`` (with ``Phi_O = fixed``).

    Each point draws from its own child of ``SeedSequence(seed)``, so points
    are independent and the sweep is reproducible.
    """
    if sweep not in ("phi", "xi"):
        raise ValueError("sweep must be 'phi' or 'xi'")
    values = np.asarray(values, dtype=float)
    children = np.random.SeedSequence(seed).spawn(values.size)
    out = []
    for v, child in zip(values, children):
        phi, xi = (v, fixed) if sweep == "phi" else (fixed, v)
        out.append((float(v), ramsey_run(phi, xi, shots, child)))
    return out
