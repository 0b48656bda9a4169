"""Instantaneous momentum kicks on a harmonic mode."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qls.crystal import IonPair, normal_modes

__all__ = ["KickSequence", "KickResult", "kick_displacements", "kick_evolve", "template_phase_factor",
           "kick_entangling_phase"]


@dataclass(frozen=True)
class KickSequence:
    """Signed momentum kicks ``(delta_k [1/m], t [s])``, stored in time order."""

    kicks: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ks = tuple(sorted(((float(dk), float(t)) for dk, t in self.kicks), key=lambda p: p[1]))
        times = [t for _, t in ks]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("kick times must be distinct")
        if not all(math.isfinite(x) for pair in ks for x in pair):
            raise ValueError("kick values must be finite")
        object.__setattr__(self, "kicks", ks)

    @classmethod
    def template(cls, delta_k: float, t1: float, t2: float) -> "KickSequence":
        """``{(dk, -t1), (dk, -t2), (-dk, t2), (-dk, t1)}`` with ``t1 > t2 > 0``."""
        if not t1 > t2 > 0:
            raise ValueError("template needs t1 > t2 > 0")
        return cls(((delta_k, -t1), (delta_k, -t2), (-delta_k, t2), (-delta_k, t1)))

    @property
    def delta_k(self) -> np.ndarray:
        return np.array([dk for dk, _ in self.kicks])

    @property
    def times(self) -> np.ndarray:
        return np.array([t for _, t in self.kicks])

    def shifted(self, dt: float) -> "KickSequence":
        return KickSequence(tuple((dk, t + dt) for dk, t in self.kicks))

    def scaled(self, factor: float) -> "KickSequence":
        return KickSequence(tuple((dk * factor, t) for dk, t in self.kicks))

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])


@dataclass(frozen=True)
class KickResult:
    times: np.ndarray  # kick times, s
    trajectory: np.ndarray  # z after each kick, starting with z0
    phase: float
    residual: float


def kick_displacements(seq: KickSequence, omega: float, a: float) -> np.ndarray:
    """Rotating-frame jumps ``-i dk a/sqrt2 exp(i omega t)`` (same sign as a continuous force)."""
    return -1j * seq.delta_k * (a / math.sqrt(2.0)) * np.exp(1j * omega * seq.times)


def kick_evolve(seq: KickSequence, omega: float, a: float, z0: complex = 0.0) -> KickResult:
    """Apply the kicks from ``z0``.

    The phase is accumulated along the path as ``sum_j Im(conj(z_{j-1}) d_j)``
    with the starting-point term ``Im(conj(z0) sum d)`` removed, which leaves
    ``sum_{j<k} Im(conj(d_j) d_k)``. The residual is ``|sum_j d_j|``.
    """
    d = kick_displacements(seq, omega, a)
    z0 = complex(z0)
    path = np.empty(d.size + 1, dtype=complex)
    path[0] = z0
    acc = 0.0
    z = z0
    for j, dj in enumerate(d):
        acc += (np.conj(z) * dj).imag
        z = z + dj
        path[j + 1] = z
    total = complex(d.sum())
    phase = acc - (np.conj(z0) * total).imag
    return KickResult(times=seq.times, trajectory=path, phase=float(phase), residual=float(abs(total)))


def template_phase_factor(x1: float, x2: float, r: float) -> float:
    """``K`` of the four-kick template at mode ratio ``r``; times in units of 1/omega.

    A mode of frequency ``r omega`` kicked by the template with ``dk`` on a
    coordinate of length ``a`` acquires ``(a^2/2) dk^2 K``.
    """
    a, b = r * (x1 - x2), r * (x1 + x2)
    return 2.0 * math.sin(a) - 2.0 * math.sin(b) - math.sin(2 * r * x1) - math.sin(2 * r * x2)


def kick_entangling_phase(seq_C: KickSequence, seq_T: KickSequence, pair: IonPair):
    """Cross phase (coefficient of sigma_C O) and per-mode residuals of kicks on both ions.

    Uses the com/stretch coordinates with forces ``F_com = F1 + F2`` and
    ``F_str = (m2 F1 - m1 F2)/M``. The kick times of both ions must coincide.
    Returns ``(phi_CT, phi_com, phi_str, residual_com, residual_str)`` where
    the local phases and residuals are for ``sigma_C = O = +1``.
    """
    if not np.array_equal(seq_C.times, seq_T.times):
        raise ValueError("control and target kicks must share their times")
    modes = normal_modes(pair)
    m1, m2 = pair.control.mass_kg, pair.target.mass_kg
    total = m1 + m2
    kc, kt = seq_C.delta_k, seq_T.delta_k
    out = {}
    for name, w, a, (pc, pt) in (
        ("com", modes.omega_com, modes.a_com, (1.0, 1.0)),
        ("str", modes.omega_str, modes.a_str, (m2 / total, -m1 / total)),
    ):
        dC = kick_displacements(KickSequence(tuple(zip(pc * kc, seq_C.times))), w, a)
        dT = kick_displacements(KickSequence(tuple(zip(pt * kt, seq_T.times))), w, a)
        # phase bilinear in the two displacement sets; keep only the mixed part
        n = len(dT)
        cross = 0.0
        for j in range(n):
            for k in range(j + 1, n):
                cross += (np.conj(dC[j]) * dT[k]).imag + (np.conj(dT[j]) * dC[k]).imag
        full = kick_evolve(KickSequence(tuple(zip(pc * kc + pt * kt, seq_C.times))), w, a)
        out[name] = (cross, full.phase, full.residual)
    return (
        out["com"][0] + out["str"][0],
        out["com"][1],
        out["str"][1],
        out["com"][2],
        out["str"][2],
    )
