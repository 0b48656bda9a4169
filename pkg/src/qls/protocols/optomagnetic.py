"""Hybrid scheme: femtosecond pi-pulse trains kick the control, a weak force drives the target."""
from __future__ import annotations

import math

__all__ = ["pulse_train_momentum", "hybrid_gain"]


def pulse_train_momentum(n_pulses: int, wavelength: float) -> float:
    """Momentum kick ``N 2 pi / lambda`` (1/m) of ``N`` resonant pi-pulses."""
    if isinstance(n_pulses, bool) or int(n_pulses) != n_pulses or n_pulses < 1:
        raise ValueError("n_pulses must be a positive integer")
    if not wavelength > 0:
        raise ValueError("wavelength must be positive")
    return n_pulses * 2.0 * math.pi / wavelength


def hybrid_gain(n_pulses: int, wavelength: float, weak_target_kick: float, baseline_kick_C: float,
                baseline_kick_T: float | None = None) -> float:
    """Ratio of the hybrid phase to a baseline, using ``phi_CT ~ dk_C dk_T``.

    With ``baseline_kick_T`` the ratio is
    ``(N 2pi/lambda * weak_target_kick) / (baseline_kick_C * baseline_kick_T)``;
    without it the target kick is taken unchanged and the ratio reduces to
    ``(N 2pi/lambda) / baseline_kick_C``.
    """
    if not (weak_target_kick > 0 and baseline_kick_C > 0):
        raise ValueError("kicks must be positive")
    dk_c = pulse_train_momentum(n_pulses, wavelength)
    if baseline_kick_T is None:
        return dk_c / baseline_kick_C
    if not baseline_kick_T > 0:
        raise ValueError("kicks must be positive")
    return dk_c * weak_target_kick / (baseline_kick_C * baseline_kick_T)
