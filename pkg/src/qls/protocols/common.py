from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Default sweep range of the trap frequency, rad/s (100 kHz to 5 MHz).
DEFAULT_OMEGA_GRID = 2 * math.pi * np.geomspace(100e3, 5e6, 40)
#: Target phase for maximal entanglement, per quadrant.
PHI_MAX_ENTANGLING = math.pi / 8


@dataclass(frozen=True)
class FeasibilityPoint:
    """Requirement at one trap frequency. Unused requirement fields are None."""

    omega: float  # rad/s
    pulse_time: float  # s
    total_gate_time: float  # s
    error_budget: float
    feasible: bool
    detuning: float | None = None  # rad/s
    gradient: float | None = None  # T/m
    nu_over_omega: float | None = None
    reason: str = ""


def check_grid(omega_grid) -> np.ndarray:
    grid = np.asarray(omega_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("omega grid must be a non-empty 1-d array")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("omega grid must be positive and strictly increasing")
    return grid
