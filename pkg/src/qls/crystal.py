"""Axial normal modes of a two-ion crystal with unequal masses.

Both ions sit in the same static electrostatic potential, so they share the
spring constant ``k = m_C * omega**2``; the Coulomb repulsion linearized at
equilibrium contributes ``2k`` to the curvature of the separation. Ion 1 is
the control (C), ion 2 the target (T).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qls.constants import AMU, HBAR

__all__ = [
    "IonSpecies",
    "IonPair",
    "ModeSpectrum",
    "normal_modes",
    "hessian",
    "project_forces",
    "modal_forces",
    "load_species",
    "SPECIES_KEYS",
]

SPECIES_KEYS = ("name", "mass_u", "charge_e", "lambda_nm", "gamma_2pi_MHz")


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float  # atomic mass units
    charge: int = 1
    wavelength: float | None = None  # m
    linewidth: float | None = None  # Gamma, rad/s

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"{self.name}: mass must be positive, got {self.mass}")
        if self.charge != 1:
            raise ValueError(f"{self.name}: only singly charged ions are modelled")
        if (self.wavelength is None) != (self.linewidth is None):
            raise ValueError(f"{self.name}: wavelength and linewidth must be given together")
        if self.wavelength is not None and not (self.wavelength > 0 and self.linewidth > 0):
            raise ValueError(f"{self.name}: wavelength and linewidth must be positive")

    @property
    def mass_kg(self) -> float:
        return self.mass * AMU

    @property
    def has_transition(self) -> bool:
        return self.wavelength is not None


@dataclass(frozen=True)
class IonPair:
    control: IonSpecies
    target: IonSpecies
    omega: float  # control-ion axial trap frequency, rad/s

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def mu(self) -> float:
        """Mass ratio m_T / m_C."""
        return self.target.mass / self.control.mass

    @property
    def total_mass_kg(self) -> float:
        return self.control.mass_kg + self.target.mass_kg

    @property
    def a2(self) -> float:
        """hbar / ((m_C + m_T) omega), m^2."""
        return HBAR / (self.total_mass_kg * self.omega)

    def with_omega(self, omega: float) -> "IonPair":
        return IonPair(self.control, self.target, omega)


@dataclass(frozen=True)
class ModeSpectrum:
    omega_com: float
    omega_str: float
    eigvec_com: np.ndarray  # mass-weighted, unit norm
    eigvec_str: np.ndarray
    a2: float  # hbar / ((m_C + m_T) omega)
    a_com: float  # sqrt(hbar / (M omega_com)), com coordinate with total mass M
    a_str: float  # sqrt(hbar / (m_red omega_str)), relative coordinate with reduced mass

    def frequencies(self) -> tuple[float, float]:
        return self.omega_com, self.omega_str


def mode_ratios(mu: float) -> tuple[float, float]:
    """(omega_com/omega, omega_str/omega) for mass ratio ``mu``."""
    if not mu > 0:
        raise ValueError("mass ratio must be positive")
    root = math.sqrt(1.0 - mu + mu * mu)
    # the minus branch loses digits near mu = 1 - root; rewrite via the product
    # w+^2 w-^2 = 3 omega^4 / mu
    plus = (1.0 + mu + root) / mu
    minus = 3.0 / (mu * plus)
    return math.sqrt(minus), math.sqrt(plus)


def hessian(pair: IonPair) -> np.ndarray:
    """Curvature matrix of the axial potential (N/m), positions (x_C, x_T)."""
    k = pair.control.mass_kg * pair.omega**2
    return k * np.array([[2.0, -1.0], [-1.0, 2.0]])


def normal_modes(pair: IonPair) -> ModeSpectrum:
    r_com, r_str = mode_ratios(pair.mu)
    w_com, w_str = r_com * pair.omega, r_str * pair.omega
    m = np.array([pair.control.mass_kg, pair.target.mass_kg])
    k = hessian(pair)
    dyn = k / np.sqrt(np.outer(m, m))
    # eigenvectors of the mass-weighted dynamical matrix; eigenvalues taken
    # from the closed form, vectors fixed by the 2x2 structure
    vecs = []
    for w in (w_com, w_str):
        v = np.array([dyn[0, 1], w * w - dyn[0, 0]])
        if np.allclose(v, 0.0):
            v = np.array([w * w - dyn[1, 1], dyn[1, 0]])
        v = v / np.linalg.norm(v)
        if v[0] < 0:
            v = -v
        vecs.append(v)
    total = pair.total_mass_kg
    reduced = m[0] * m[1] / total
    return ModeSpectrum(
        omega_com=w_com,
        omega_str=w_str,
        eigvec_com=vecs[0],
        eigvec_str=vecs[1],
        a2=pair.a2,
        a_com=math.sqrt(HBAR / (total * w_com)),
        a_str=math.sqrt(HBAR / (reduced * w_str)),
    )


def project_forces(f_C: float, f_T: float, pair: IonPair) -> tuple[float, float]:
    """Com and stretch forces (N) from per-ion force/hbar values (1/(m s)).

    ``F_com = F1 + F2`` and ``F_str = (m2 F1 - m1 F2) / (m1 + m2)`` with
    ``F1 = hbar f_C`` on the control and ``F2 = hbar f_T`` on the target.
    """
    f1, f2 = HBAR * f_C, HBAR * f_T
    m1, m2 = pair.control.mass, pair.target.mass
    return f1 + f2, (m2 * f1 - m1 * f2) / (m1 + m2)


def modal_forces(f_C: float, f_T: float, pair: IonPair) -> tuple[float, float]:
    """Forces/hbar projected on the mass-weighted eigenvectors, 1/(m s) per sqrt(kg).

    The mode coordinate q_k = sum_i v_ki sqrt(m_i) x_i has unit mass; its
    drive is sum_i v_ki F_i / sqrt(m_i).
    """
    modes = normal_modes(pair)
    inv = 1.0 / np.sqrt([pair.control.mass_kg, pair.target.mass_kg])
    f = np.array([f_C, f_T]) * inv
    return float(modes.eigvec_com @ f), float(modes.eigvec_str @ f)


def species_from_dict(raw: dict, allow_unknown: bool = False, source: str = "<dict>") -> IonSpecies:
    from qls.io import InputError

    missing = [k for k in ("name", "mass_u", "charge_e") if k not in raw]
    if missing:
        raise InputError(f"{source}: missing keys {missing}")
    extra = [k for k in raw if k not in SPECIES_KEYS]
    if extra and not allow_unknown:
        raise InputError(f"{source}: unknown keys {extra}")
    if not isinstance(raw["name"], str):
        raise InputError(f"{source}: name must be a string")
    for k in ("mass_u", "charge_e", "lambda_nm", "gamma_2pi_MHz"):
        if k in raw and (isinstance(raw[k], bool) or not isinstance(raw[k], (int, float))):
            raise InputError(f"{source}: {k} must be a number")
    lam = raw.get("lambda_nm")
    gam = raw.get("gamma_2pi_MHz")
    try:
        return IonSpecies(
            name=raw["name"],
            mass=float(raw["mass_u"]),
            charge=raw["charge_e"],
            wavelength=None if lam is None else lam * 1e-9,
            linewidth=None if gam is None else 2 * math.pi * gam * 1e6,
        )
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def load_species(path, allow_unknown: bool = False) -> IonSpecies:
    """Read a species file (JSON object with :data:`SPECIES_KEYS`)."""
    from qls.io import read_json_object

    return species_from_dict(read_json_object(path), allow_unknown=allow_unknown, source=str(path))
