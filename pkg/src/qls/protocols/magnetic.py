"""State-dependent forces from oscillating magnetic-field gradients."""
from __future__ import annotations

import math

from qls.constants import HBAR, MU_B
from qls.crystal import IonPair, normal_modes
from qls.errors import PoleError
from qls.phase.gaussian import GaussianDrive, enhancement, phase_gaussian_exact, restoration_time
from qls.protocols.common import DEFAULT_OMEGA_GRID, PHI_MAX_ENTANGLING, FeasibilityPoint, check_grid

__all__ = ["magnetic_force", "magnetic_feasibility", "required_gradient", "static_equivalent",
           "static_prefactor", "drive_frequency"]


def magnetic_force(gradient: float, mu: float) -> float:
    """Force/hbar ``(dB/dx) mu / hbar`` in 1/(m s); ``mu`` in J/T."""
    return gradient * mu / HBAR


def drive_frequency(pair: IonPair, nu_over_omega: float, reference: str = "com") -> float:
    """Carrier ``nu``: ``ratio * omega_com`` (``reference="com"``) or ``ratio * omega``."""
    if reference == "com":
        return nu_over_omega * normal_modes(pair).omega_com
    if reference == "omega":
        return nu_over_omega * pair.omega
    raise ValueError("reference must be 'com' or 'omega'")


def required_gradient(pair: IonPair, nu: float, T: float, phi_target: float,
                      mu_C: float = MU_B, mu_T: float = MU_B, closed_form: bool = False) -> float:
    """Gradient amplitude B' (T/m) giving ``|phi_CT| = |phi_target|``.

    The phase is bilinear in B', so the solve is a square root. By default
    the exact Gaussian phase on the com and stretch modes is used; with
    ``closed_form`` the asymptotic expression ``~ T Xi / omega``, which
    undercounts the phase by a factor 2 at ``nu = 0``.
    """
    xi = enhancement(nu, pair)
    if closed_form:
        coeff = 0.25 * math.sqrt(math.pi / 2.0) * pair.a2 * T / pair.omega * abs(xi)
    else:
        modes = normal_modes(pair)
        unit = GaussianDrive(1.0, T, nu)
        q = [2.0 * phase_gaussian_exact(unit, w, 1.0) / w for w in modes.frequencies()]
        coeff = abs(HBAR / pair.total_mass_kg * (q[0] - q[1]))
    coeff *= mu_C * mu_T / HBAR**2
    if coeff == 0:
        raise PoleError("vanishing enhancement: no gradient reaches the target")
    return math.sqrt(abs(phi_target) / coeff)


def magnetic_feasibility(pair: IonPair, nu_over_omega: float, T: float | None = None,
                         phi_target: float = PHI_MAX_ENTANGLING, mu_C: float = MU_B, mu_T: float = MU_B,
                         omega_grid=None, reference: str = "com", closed_form: bool = False) -> list[FeasibilityPoint]:
    """Gradient and gate time reaching ``phi_target`` at each trap frequency.

    The Gaussian envelope ``exp(-(2t/T)^2) B' cos(nu t)`` drives both ions.
    Without ``T`` the gate time is the restoration bound
    ``5 pi / min(|nu - omega_com|, |nu - omega_str|)``. Points on a pole are
    reported infeasible.
    """
    grid = check_grid(DEFAULT_OMEGA_GRID if omega_grid is None else omega_grid)
    out = []
    for w in grid:
        p = pair.with_omega(float(w))
        nu = drive_frequency(p, nu_over_omega, reference)
        modes = normal_modes(p)
        try:
            t_gate = restoration_time(nu, modes.frequencies()) if T is None else float(T)
            g = required_gradient(p, nu, t_gate, phi_target, mu_C, mu_T, closed_form)
        except PoleError as exc:
            out.append(FeasibilityPoint(float(w), math.inf, math.inf, 0.0, False, gradient=math.inf,
                                        nu_over_omega=nu_over_omega, reason=str(exc)))
            continue
        out.append(FeasibilityPoint(
            omega=float(w),
            pulse_time=t_gate,
            total_gate_time=t_gate,
            error_budget=0.0,
            feasible=True,
            gradient=g,
            nu_over_omega=nu_over_omega,
        ))
    return out


def static_prefactor(pair: IonPair) -> float:
    """``(4 (omega_com/omega)^2 Xi(0))^(1/3)``: leading-order constant of the static-equivalent law.

    Matches the near-resonant closed form, where ``Xi ~ -1/(2 eta rho_c^2)``,
    to the exact static phase, which is twice the closed form at ``nu = 0``.
    """
    modes = normal_modes(pair)
    rho_c = modes.omega_com / pair.omega
    return (4.0 * rho_c * rho_c * enhancement(0.0, pair)) ** (1.0 / 3.0)


def static_equivalent(eta: float, omega: float, pair: IonPair | None = None) -> tuple[float, float]:
    """Static-drive trap frequency and gate time matching a resonant gate.

    A gate driven at ``nu = (1 + eta) omega_com`` for ``T = 5 pi/(eta omega)``
    is matched by ``nu = 0`` at ``omega_0 = kappa eta^(2/3) omega`` with
    ``T_0 = 5 pi / omega_0``. The bare law has ``kappa = 1``; passing the
    ``pair`` uses the leading-order constant from :func:`static_prefactor`.
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    if not omega > 0:
        raise ValueError("omega must be positive")
    kappa = 1.0 if pair is None else static_prefactor(pair.with_omega(omega))
    omega_0 = kappa * eta ** (2.0 / 3.0) * omega
    return omega_0, 5.0 * math.pi / omega_0
