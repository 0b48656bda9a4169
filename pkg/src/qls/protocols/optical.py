"""Optical kicks from AC Stark-shift gradients."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

from qls._accel import max_threads
from qls.constants import C_LIGHT, H_PLANCK, HBAR
from qls.crystal import IonPair, IonSpecies
from qls.errors import DispersiveRegimeError
from qls.phase.optimize import optimize_kick_times
from qls.protocols.common import DEFAULT_OMEGA_GRID, FeasibilityPoint, check_grid

__all__ = [
    "ScatteringWarning",
    "stark_force",
    "scattering_error",
    "saturation_intensity",
    "rabi_from_power",
    "kick_phase_factor",
    "optical_feasibility",
    "DISPERSIVE_RATIO",
    "PULSED_FRACTION",
]

#: Minimum |detuning| / Rabi frequency for the dispersive force law.
DISPERSIVE_RATIO = 10.0
#: Longest pulse, as a fraction of the trap period, still treated as a kick.
PULSED_FRACTION = 0.1


class ScatteringWarning(UserWarning):
    pass


def stark_force(rabi: float, detuning: float, ell: float) -> float:
    """Force/hbar ``(Omega^2 / Delta) / ell`` in 1/(m s)."""
    if not ell > 0:
        raise ValueError("gradient length ell must be positive")
    if rabi != 0 and abs(detuning) < DISPERSIVE_RATIO * abs(rabi):
        raise DispersiveRegimeError(
            f"|Delta| = {abs(detuning):.4g} rad/s is below {DISPERSIVE_RATIO:g} x Omega = {abs(rabi):.4g} rad/s"
        )
    if rabi == 0:
        return 0.0
    return rabi * rabi / detuning / ell


def scattering_error(gamma: float, rabi: float, T: float, detuning: float) -> float:
    """Photon-scattering probability ``Gamma Omega^2 T / Delta^2``; warns when >= 1."""
    if gamma < 0 or T < 0:
        raise ValueError("gamma and T must be non-negative")
    if detuning == 0:
        raise ValueError("detuning must be non-zero")
    eps = gamma * rabi * rabi * T / (detuning * detuning)
    if eps >= 1.0:
        warnings.warn(f"scattering estimate {eps:.3g} >= 1: outside the perturbative budget", ScatteringWarning,
                      stacklevel=2)
    return eps


def saturation_intensity(species: IonSpecies) -> float:
    """Two-level saturation intensity ``pi h c Gamma / (3 lambda^3)``, W/m^2."""
    if not species.has_transition:
        raise ValueError(f"{species.name}: no optical transition data")
    return math.pi * H_PLANCK * C_LIGHT * species.linewidth / (3.0 * species.wavelength**3)


def rabi_from_power(power: float, waist: float, species: IonSpecies) -> float:
    """Rabi frequency at the centre of a Gaussian beam of waist ``waist``.

    ``I = 2P/(pi w^2)`` and ``Omega^2 = Gamma^2 I / (2 I_sat)``.
    """
    if power < 0 or not waist > 0:
        raise ValueError("power must be non-negative and waist positive")
    intensity = 2.0 * power / (math.pi * waist * waist)
    return species.linewidth * math.sqrt(intensity / (2.0 * saturation_intensity(species)))


@lru_cache(maxsize=64)
def _optimized_template(pair_key):
    control, target = pair_key
    opt = optimize_kick_times(IonPair(control, target, 1.0), delta_k=1.0)
    return opt.G, opt.t1, opt.t2  # times in units of 1/omega since omega = 1


def kick_phase_factor(pair: IonPair) -> tuple[float, float, float]:
    """(G0, x1, x2) of the optimized template; ``phi_CT = a^2 dk_C dk_T G0``, times ``x/omega``."""
    return _optimized_template((pair.control, pair.target))


def _point(pair: IonPair, omega: float, eps: float, ell: float, power: float, phi_target: float, g0, x1,
           waist: float):
    c, t = pair.control, pair.target
    rabi = [rabi_from_power(power, waist, s) for s in (c, t)]
    worst = max(s.linewidth * r * r for s, r in zip((c, t), rabi))
    # per-pulse scattering budget: tau = eps Delta^2 / max(Gamma Omega^2)
    # kick dk_i = Omega_i^2 tau / (Delta ell) = s_i Delta with s_i below
    s_c, s_t = (r * r * eps / (ell * worst) for r in rabi)
    a2 = HBAR / (pair.total_mass_kg * omega)
    detuning = math.sqrt(abs(phi_target) / (a2 * abs(g0) * s_c * s_t))
    tau = eps * detuning * detuning / worst
    total = 2.0 * x1 / omega + 4.0 * tau
    reasons = []
    if tau > PULSED_FRACTION * 2.0 * math.pi / omega:
        reasons.append(f"pulse {tau:.3g} s exceeds {PULSED_FRACTION:g} trap period")
    if detuning < DISPERSIVE_RATIO * max(rabi):
        reasons.append("detuning below the dispersive bound")
    return FeasibilityPoint(
        omega=float(omega),
        pulse_time=float(tau),
        total_gate_time=float(total),
        error_budget=float(eps),
        feasible=not reasons,
        detuning=float(detuning),
        reason="; ".join(reasons),
    )


def optical_feasibility(pair: IonPair, eps: float, ell: float, power: float, phi_target: float,
                        omega_grid=None, waist: float | None = None) -> list[FeasibilityPoint]:
    """Detuning, pulse time and gate duration reaching ``phi_target`` at each trap frequency.

    Chain: laser power gives the Rabi frequencies at beam waist ``ell``; the
    scattering budget ``eps`` fixes the pulse length for a given detuning;
    force times pulse length gives each kick; the optimized four-kick
    sequence turns the kicks into ``phi_CT = a^2 dk_C dk_T G0``. Since every
    kick is linear in the detuning the chain inverts in closed form.
    Points violating the pulsed or dispersive regime are flagged, not raised.
    The beam waist defaults to ``ell``; pass ``waist`` for a lattice, whose
    gradient length is much shorter than its beam size.
    """
    if not (eps > 0 and ell > 0 and power > 0 and phi_target != 0):
        raise ValueError("eps, ell, power must be positive and phi_target non-zero")
    for s in (pair.control, pair.target):
        if not s.has_transition:
            raise ValueError(f"{s.name}: species file lacks lambda_nm / gamma_2pi_MHz")
    grid = check_grid(DEFAULT_OMEGA_GRID if omega_grid is None else omega_grid)
    g0, x1, _ = kick_phase_factor(pair)
    waist = ell if waist is None else waist
    if not waist > 0:
        raise ValueError("waist must be positive")

    def one(w):
        return _point(pair.with_omega(w), w, eps, ell, power, phi_target, g0, x1, waist)

    workers = min(max_threads(), 8)
    if workers > 1 and grid.size > 8:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, grid))
    return [one(w) for w in grid]
