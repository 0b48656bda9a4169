"""Geometric phases of continuously driven modes.

Convention: a mode of mass ``m`` and frequency ``omega`` has oscillator
length ``a = sqrt(hbar / (m omega))``; a force ``hbar f(t)`` displaces its
rotating-frame amplitude as ``z(t) = z0 - i (a/sqrt2) int f(s) exp(i omega s) ds``
and the state acquires the phase

    phi = (a^2 / 2) int dt int_{s<t} ds sin(omega (t - s)) f(t) f(s),

which equals ``Im int conj(z - z0) dz``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import dawsn

from qls.constants import HBAR
from qls.crystal import IonPair, normal_modes
from qls.errors import PoleError, ResolutionError
from qls.phase import kernels

__all__ = [
    "GaussianDrive",
    "PhaseResult",
    "QuadratureResult",
    "RestorationWarning",
    "MIN_SAMPLES_PER_PERIOD",
    "RESTORATION_TOL",
    "sample_grid",
    "restoration_time",
    "phase_numeric",
    "phase_of_drive",
    "phase_analytic",
    "phase_gaussian_exact",
    "trajectory",
    "trajectory_phase",
    "enhancement",
    "entangling_phase",
]

MIN_SAMPLES_PER_PERIOD = 40
DEFAULT_SAMPLES_PER_PERIOD = 100
#: half-width of the sampled window in units of T; the envelope there is exp(-25)
WINDOW_HALF_WIDTH = 2.5
RESTORATION_TOL = 1e-3


class RestorationWarning(UserWarning):
    """A drive leaves some mode displaced beyond the restoration tolerance."""


@dataclass(frozen=True)
class GaussianDrive:
    """``f(t) = f0 exp(-(2t/T)^2) cos(nu t)``, force/hbar in 1/(m s), centred on t = 0."""

    f0: float
    T: float
    nu: float = 0.0

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError(f"T must be positive, got {self.T}")
        if not (math.isfinite(self.f0) and math.isfinite(self.nu)):
            raise ValueError("f0 and nu must be finite")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.f0 * np.exp(-((2.0 * t / self.T) ** 2)) * np.cos(self.nu * t)

    def scaled(self, factor: float) -> "GaussianDrive":
        return GaussianDrive(self.f0 * factor, self.T, self.nu)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    n_samples: int


@dataclass(frozen=True)
class PhaseResult:
    """Phases of a two-ion gate.

    ``phi_CT`` is the coefficient of ``sigma_C * O``; ``phi_com``/``phi_str``
    are the full phases of each mode for ``sigma_C = O = +1``. Residuals are
    final rotating-frame displacements relative to the peak excursion
    (Gaussian drives) or absolute, in units of the oscillator length (kicks).
    """

    phi_com: float
    phi_str: float
    phi_CT: float
    residual_com: float
    residual_str: float
    phi_CT_numeric: float | None = None
    phi_CT_modal: float | None = None
    phi_CT_exact: float | None = None
    restored: bool = True


def sample_grid(T: float, omega_max: float, samples_per_period: float = DEFAULT_SAMPLES_PER_PERIOD,
                half_width: float = WINDOW_HALF_WIDTH) -> np.ndarray:
    """Uniform odd-length grid on ``[-half_width T, half_width T]``."""
    if omega_max <= 0:
        raise ValueError("omega_max must be positive")
    span = 2.0 * half_width * T
    n = int(math.ceil(span * omega_max * samples_per_period / (2.0 * math.pi)))
    n += n % 2  # even interval count
    return np.linspace(-half_width * T, half_width * T, n + 1)


def restoration_time(nu: float, omegas) -> float:
    """Shortest gate duration ``5 pi / min_k |nu - omega_k|`` restoring every mode."""
    gap = min(abs(nu - w) for w in omegas)
    if gap == 0:
        raise PoleError("drive on resonance with a mode: no restoring gate time")
    return 5.0 * math.pi / gap


def _uniform(t, n: int):
    if np.ndim(t) == 0:
        total = float(t)
        if not total > 0:
            raise ValueError("T_total must be positive")
        return 0.0, total / (n - 1)
    t = np.asarray(t, dtype=float)
    if t.shape != (n,):
        raise ValueError("time grid and samples differ in length")
    h = (t[-1] - t[0]) / (n - 1)
    if not h > 0 or not np.allclose(np.diff(t), h, rtol=1e-9, atol=0):
        raise ValueError("time grid must be uniform and increasing")
    return float(t[0]), float(h)


def _check_resolution(h: float, omega: float, nu: float) -> None:
    w = max(abs(omega), abs(nu))
    if w == 0:
        return
    per_period = 2.0 * math.pi / (w * h)
    if per_period < MIN_SAMPLES_PER_PERIOD:
        raise ResolutionError(
            f"{per_period:.1f} samples per period 2pi/{w:.4g} rad/s; at least {MIN_SAMPLES_PER_PERIOD} required"
        )


def phase_numeric(f, omega: float, t, a: float = 1.0, nu: float = 0.0, full_output: bool = False):
    """Geometric phase of samples ``f`` (force/hbar, 1/(m s)) on a mode.

    ``t`` is the uniform sample-time array or, as a scalar, the total
    duration with samples spanning ``[0, t]``. ``nu`` is the carrier of the
    drive, used only for the resolution check. Fourth-order quadrature; with
    ``full_output`` a Richardson error estimate from the half-resolution
    subgrid is returned as :class:`QuadratureResult`.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size < 3:
        raise ValueError("need at least three force samples")
    t0, h = _uniform(t, f.size)
    _check_resolution(h, omega, nu)
    value = 0.5 * a * a * kernels.bilinear_phase(f, f, t0, h, omega)
    if not full_output:
        return value
    err = math.nan
    if f.size >= 7:
        coarse = 0.5 * a * a * kernels.bilinear_phase(f[::2], f[::2], t0, 2 * h, omega)
        err = abs(value - coarse) / 15.0
    return QuadratureResult(value, err, f.size)


def phase_of_drive(drive: GaussianDrive, omega: float, a: float,
                   samples_per_period: float = DEFAULT_SAMPLES_PER_PERIOD, full_output: bool = False):
    t = sample_grid(drive.T, max(omega, abs(drive.nu)), samples_per_period)
    return phase_numeric(drive(t), omega, t, a=a, nu=drive.nu, full_output=full_output)


def phase_analytic(drive: GaussianDrive, omega: float, a: float) -> float:
    """Leading-order closed form ``sqrt(pi/2) (f0 a)^2 omega T / (8 (omega^2 - nu^2))``.

    Asymptotic in ``omega T``; the relative correction is about
    ``2 (2 omega^2 + 6 nu^2) / ((omega^2 - nu^2)^2 T^2)``. For ``nu = 0`` the
    exact phase is twice this value (the carrier average of cos^2 is absent).
    """
    d = omega * omega - drive.nu * drive.nu
    if d == 0:
        raise PoleError("nu = omega: resonant drive has no restored closed form")
    return math.sqrt(math.pi / 2.0) * (drive.f0 * a) ** 2 * omega * drive.T / (8.0 * d)


def phase_gaussian_exact(drive: GaussianDrive, omega: float, a: float) -> float:
    """Exact phase of the Gaussian drive (integrated over all time), via Dawson functions."""
    s = drive.T / (2.0 * math.sqrt(2.0))
    nu, T = drive.nu, drive.T
    bracket = dawsn(s * (omega - nu)) + dawsn(s * (omega + nu)) + 2.0 * math.exp(-(nu * T) ** 2 / 8.0) * dawsn(s * omega)
    return (a * drive.f0 * T) ** 2 * math.sqrt(math.pi) / 32.0 * float(bracket)


def trajectory(drive, omega: float, z0: complex, t_grid, a: float = 1.0, nu: float | None = None) -> np.ndarray:
    """Rotating-frame amplitude ``z(t)`` on ``t_grid`` (dimensionless).

    ``drive`` is a :class:`GaussianDrive` or an array of force/hbar samples.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if isinstance(drive, GaussianDrive):
        f = drive(t_grid)
        nu = drive.nu
    else:
        f = np.asarray(drive, dtype=float)
    t0, h = _uniform(t_grid, f.size)
    _check_resolution(h, omega, nu or 0.0)
    g = kernels.cumulative_phase_integral(f, t0, h, omega)
    return complex(z0) - 1j * (a / math.sqrt(2.0)) * g


def trajectory_phase(drive, omega: float, z0: complex, t_grid, a: float = 1.0) -> tuple[np.ndarray, float]:
    """Trajectory from ``z0`` and the geometric phase integrated along it.

    The phase is ``Im int conj(z) dz`` evaluated on the actual path minus the
    displacement term ``Im(conj(z0) (z_end - z0))``; it is independent of the
    starting point.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    f = drive(t_grid) if isinstance(drive, GaussianDrive) else np.asarray(drive, dtype=float)
    z = trajectory(f, omega, z0, t_grid, a, nu=getattr(drive, "nu", None))
    zdot = -1j * (a / math.sqrt(2.0)) * f * np.exp(1j * omega * t_grid)
    t0, h = _uniform(t_grid, f.size)
    total = kernels.simpson(np.imag(np.conj(z) * zdot), h)
    phase = total - float(np.imag(np.conj(z0) * (z[-1] - z0)))
    return z, phase


def enhancement(nu: float, pair: IonPair) -> float:
    """``omega^2/(omega_com^2 - nu^2) - omega^2/(omega_str^2 - nu^2)``."""
    modes = normal_modes(pair)
    w2 = pair.omega**2
    terms = []
    for wk in (modes.omega_com, modes.omega_str):
        d = wk * wk - nu * nu
        if abs(d) <= 1e-12 * wk * wk:
            raise PoleError(f"nu = {nu:.6g} rad/s sits on the mode at {wk:.6g} rad/s")
        terms.append(w2 / d)
    return terms[0] - terms[1]


def _relative_residual(g: np.ndarray) -> float:
    peak = float(np.max(np.abs(g)))
    if peak == 0.0:
        return 0.0
    return float(abs(g[-1]) / peak)


def entangling_phase(drive_C: GaussianDrive, drive_T: GaussianDrive, pair: IonPair,
                     samples_per_period: float = DEFAULT_SAMPLES_PER_PERIOD,
                     numeric: bool = True) -> PhaseResult:
    """Entangling phase of Gaussian drives on control and target.

    ``phi_CT`` is the closed form ``(1/4) sqrt(pi/2) f_C f_T a^2 T / omega * Xi``.
    With ``numeric`` the cross term is also integrated numerically on the com
    and stretch coordinates driven by ``F_com`` and ``F_str``
    (``phi_CT_numeric``) and on the mass-weighted eigenmodes
    (``phi_CT_modal``). ``phi_CT_exact`` is the same com/stretch path with
    the exact Gaussian integrals. The cross term is assembled from the
    bilinear integrals directly, never by differencing full phases.
    """
    if drive_C.T != drive_T.T or drive_C.nu != drive_T.nu:
        raise ValueError("control and target drives must share T and nu")
    T, nu = drive_C.T, drive_C.nu
    fC, fT = drive_C.f0, drive_T.f0
    modes = normal_modes(pair)
    xi = enhancement(nu, pair)
    phi_ct = 0.25 * math.sqrt(math.pi / 2.0) * fC * fT * pair.a2 * T / pair.omega * xi

    total = pair.total_mass_kg
    m1, m2 = pair.control.mass_kg, pair.target.mass_kg
    w_c, w_s = modes.omega_com, modes.omega_str

    unit = GaussianDrive(1.0, T, nu)
    q_c = 2.0 * phase_gaussian_exact(unit, w_c, 1.0)
    q_s = 2.0 * phase_gaussian_exact(unit, w_s, 1.0)
    phi_exact = HBAR / total * fC * fT * (q_c / w_c - q_s / w_s)

    t = sample_grid(T, max(w_s, abs(nu)), samples_per_period)
    t0, h = float(t[0]), float(t[1] - t[0])
    gC, gT = drive_C(t), drive_T(t)
    f_com = gC + gT
    f_str = (m2 * gC - m1 * gT) / total
    res_c = _relative_residual(kernels.cumulative_phase_integral(f_com, t0, h, w_c))
    res_s = _relative_residual(kernels.cumulative_phase_integral(f_str, t0, h, w_s))
    restored = res_c < RESTORATION_TOL and res_s < RESTORATION_TOL
    if not restored:
        warnings.warn(
            f"drive does not restore the motion: residual com {res_c:.3g}, str {res_s:.3g} "
            f"(tolerance {RESTORATION_TOL}); closed-form phases unreliable",
            RestorationWarning,
            stacklevel=2,
        )

    a2_c = HBAR / (total * w_c)
    a2_s = HBAR / (m1 * m2 / total * w_s)
    if numeric:
        def cross(w):
            return kernels.bilinear_phase(gC, gT, t0, h, w) + kernels.bilinear_phase(gT, gC, t0, h, w)

        def self_(g, w):
            return kernels.bilinear_phase(g, g, t0, h, w)

        qs_c, qs_s = cross(w_c), cross(w_s)
        phi_num = HBAR / (2.0 * total) * (qs_c / w_c - qs_s / w_s)
        v_c, v_s = modes.eigvec_com, modes.eigvec_str
        norm = 1.0 / math.sqrt(m1 * m2)
        phi_modal = HBAR / 2.0 * norm * (v_c[0] * v_c[1] * qs_c / w_c + v_s[0] * v_s[1] * qs_s / w_s)
        phi_com = 0.5 * a2_c * self_(f_com, w_c)
        phi_str = 0.5 * a2_s * self_(f_str, w_s)
    else:
        phi_num = phi_modal = None
        # equal envelopes: every bilinear integral is a multiple of the unit one
        phi_com = 0.5 * a2_c * (fC + fT) ** 2 * q_c
        phi_str = 0.5 * a2_s * ((m2 * fC - m1 * fT) / total) ** 2 * q_s

    return PhaseResult(
        phi_com=float(phi_com),
        phi_str=float(phi_str),
        phi_CT=float(phi_ct),
        residual_com=res_c,
        residual_str=res_s,
        phi_CT_numeric=None if phi_num is None else float(phi_num),
        phi_CT_modal=None if phi_modal is None else float(phi_modal),
        phi_CT_exact=float(phi_exact),
        restored=restored,
    )
