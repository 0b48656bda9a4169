"""Hyperfine-Zeeman structure of a homonuclear ``2Sigma`` molecular ion.

The Hamiltonian ``H = H_rot + H_sr + H_F + H_dip + H_IN + H_eqQ + H_Z`` is
assembled in the Hund's case (b) basis ``|N S J I F M_F>`` and diagonalized
block by block in ``M_F``. Energies are ``E/h`` in MHz, fields in tesla,
moments ``dE/dB`` in units of the Bohr magneton.

Only the symmetry block with even ``N`` and total nuclear spin ``I in {0, 2}``
is built (the ortho block of ``14N2+`` with ``I1 = 1``).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.optimize import linear_sum_assignment

from qls._accel import max_threads
from qls.angmom import HalfInt, wigner3j, wigner6j, wigner9j
from qls.constants import CM1_TO_MHZ, MU_B_MHZ_PER_T

__all__ = [
    "HamiltonianParams",
    "HyperfineBasisState",
    "LevelLabel",
    "ZeemanLevel",
    "MomentEntry",
    "TrackingError",
    "PARAM_KEYS",
    "DEFAULT_B_GRID",
    "build_basis",
    "term_matrices",
    "assemble_hamiltonian",
    "zeeman_map",
    "magnetic_moments",
    "distinguishability_report",
    "load_params",
    "params_to_dict",
    "write_zeeman_csv",
]

PARAM_KEYS = (
    "B_e_cm1",
    "D_e_cm1",
    "gamma_MHz",
    "gamma_N_MHz",
    "bF_MHz",
    "cdip_MHz",
    "cI_MHz",
    "eqQ_MHz",
    "g",
    "I1_twice",
)
OPTIONAL_PARAM_KEYS = ("muB_MHz_per_T",)

#: 0 to 20 mT in 201 points.
DEFAULT_B_GRID = np.linspace(0.0, 0.020, 201)

TERMS = ("rot", "sr", "F", "dip", "IN", "eqQ")

_DEGENERACY_TOL_MHZ = 1e-9


class TrackingError(RuntimeError):
    """Adiabatic level tracking could not follow a level between grid points."""


@dataclass(frozen=True)
class HamiltonianParams:
    """Molecular constants. Rotational constants in cm^-1, the rest as E/h in MHz."""

    B_e_cm1: float
    D_e_cm1: float
    gamma: float
    gamma_N: float
    b_F: float
    c_dip: float
    c_I: float
    eqQ: float
    g: float = 2.0
    I1: HalfInt = HalfInt(2)
    mu_B: float = MU_B_MHZ_PER_T

    def __post_init__(self):
        for name in ("B_e_cm1", "D_e_cm1", "gamma", "gamma_N", "b_F", "c_dip", "c_I", "eqQ", "g", "mu_B"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not isinstance(self.I1, HalfInt):
            object.__setattr__(self, "I1", HalfInt.of(self.I1))

    @property
    def B_e(self) -> float:
        """Rotational constant in MHz."""
        return self.B_e_cm1 * CM1_TO_MHZ

    @property
    def D_e(self) -> float:
        """Centrifugal distortion constant in MHz."""
        return self.D_e_cm1 * CM1_TO_MHZ

    def only(self, *terms: str, zeeman: bool = True) -> "HamiltonianParams":
        """Copy with every coupling constant outside ``terms`` set to zero."""
        unknown = set(terms) - set(TERMS)
        if unknown:
            raise ValueError(f"unknown terms {sorted(unknown)}")
        zero = {}
        if "rot" not in terms:
            zero.update(B_e_cm1=0.0, D_e_cm1=0.0)
        if "sr" not in terms:
            zero.update(gamma=0.0, gamma_N=0.0)
        for term, attr in (("F", "b_F"), ("dip", "c_dip"), ("IN", "c_I"), ("eqQ", "eqQ")):
            if term not in terms:
                zero[attr] = 0.0
        if not zeeman:
            zero["g"] = 0.0
        return replace(self, **zero)


@dataclass(frozen=True, order=True)
class HyperfineBasisState:
    """Coupled basis function ``|N S J I F M_F>``."""

    N: HalfInt
    S: HalfInt
    J: HalfInt
    I: HalfInt
    F: HalfInt
    M_F: HalfInt

    @property
    def twice(self) -> tuple[int, int, int, int, int, int]:
        return (
            self.N.twice_value,
            self.S.twice_value,
            self.J.twice_value,
            self.I.twice_value,
            self.F.twice_value,
            self.M_F.twice_value,
        )

    def __str__(self) -> str:
        return f"|N={self.N} S={self.S} J={self.J} I={self.I} F={self.F} MF={self.M_F}>"


@dataclass(frozen=True, order=True)
class LevelLabel:
    """Zero-field quantum numbers of a tracked level (twice-values)."""

    N2: int
    J2: int
    I2: int
    F2: int
    M2: int

    @staticmethod
    def _fmt(t: int, signed: bool = False) -> str:
        s = str(t // 2) if t % 2 == 0 else f"{t}/2"
        if signed and t > 0:
            s = "+" + s
        return s

    def __str__(self) -> str:
        f = self._fmt
        return f"N={f(self.N2)} J={f(self.J2)} I={f(self.I2)} F={f(self.F2)} MF={f(self.M2, True)}"

    @property
    def manifold(self) -> tuple[int, int, int, int]:
        """Zero-field multiplet (N, J, I, F) this level belongs to."""
        return (self.N2, self.J2, self.I2, self.F2)


@dataclass
class ZeemanLevel:
    """Energy curve ``E(B)/h`` (MHz) and moment ``dE/dB`` (Bohr magnetons)."""

    label: LevelLabel
    b_grid: np.ndarray
    energies: np.ndarray
    moments: np.ndarray
    purity: float = 1.0  # weight of the dominant basis state at the first grid point


@dataclass(frozen=True)
class MomentEntry:
    label: LevelLabel
    energy_MHz: float
    mu_muB: float
    mu_MHz_per_T: float
    degenerate: bool = False


# -- basis -----------------------------------------------------------------


def build_basis(n_max: int, m_f=None) -> list[HyperfineBasisState]:
    """All ``|N S J I F M_F>`` with even ``N <= n_max``, ``S = 1/2``, ``I in {0, 2}``.

    Ordered lexicographically in ``(N, J, I, F, M_F)``; restricted to a
    single ``M_F`` block when ``m_f`` is given.
    """
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 0 or n_max % 2:
        raise ValueError(f"n_max must be a non-negative even integer, got {n_max!r}")
    m2 = None if m_f is None else HalfInt.of(m_f).twice_value
    if m2 is not None and m2 % 2 == 0:
        raise ValueError("M_F must be half-integer in this block (S = 1/2, integer N and I)")
    out = []
    s2 = 1
    for n2 in range(0, 2 * int(n_max) + 1, 4):
        for j2 in range(abs(n2 - s2), n2 + s2 + 1, 2):
            for i2 in (0, 4):
                for f2 in range(abs(j2 - i2), j2 + i2 + 1, 2):
                    ms = range(-f2, f2 + 1, 2) if m2 is None else ([m2] if abs(m2) <= f2 else [])
                    for mm in ms:
                        out.append(
                            HyperfineBasisState(
                                HalfInt(n2), HalfInt(s2), HalfInt(j2), HalfInt(i2), HalfInt(f2), HalfInt(mm)
                            )
                        )
    return out


def _check_block(basis) -> None:
    if not basis:
        raise ValueError("empty basis")
    for st in basis:
        n2, s2, j2, i2, f2, m2 = st.twice
        if s2 != 1 or n2 % 4 or i2 not in (0, 4):
            raise ValueError(f"{st} is outside the even-N, I in {{0, 2}} symmetry block")
        if not (abs(n2 - s2) <= j2 <= n2 + s2 and abs(j2 - i2) <= f2 <= j2 + i2 and abs(m2) <= f2):
            raise ValueError(f"{st} violates angular momentum coupling")


# -- matrix elements -------------------------------------------------------
# Each function takes twice-values (bra first) and returns the element in
# units of its coupling constant. (-1)^x is evaluated from 2x, which must be even.


def _sign(twice_exponent: int) -> int:
    if twice_exponent % 2:
        raise ArithmeticError("non-integer phase exponent")
    return -1 if (twice_exponent // 2) % 2 else 1


def _jj(t: int) -> float:
    """j(j+1)(2j+1) from 2j."""
    j = t / 2
    return j * (j + 1) * (2 * j + 1)


@lru_cache(maxsize=None)
def _fermi(bra, ket) -> float:
    n2p, s2p, j2p, i2p, f2p, m2p = bra
    n2, s2, j2, i2, f2, m2 = ket
    if n2p != n2 or s2p != s2 or i2p != i2 or f2p != f2 or m2p != m2:
        return 0.0
    sj = wigner6j(i2 / 2, j2p / 2, f2 / 2, j2 / 2, i2 / 2, 1).value
    if sj == 0.0:
        return 0.0
    ss = wigner6j(s2 / 2, j2p / 2, n2 / 2, j2 / 2, s2 / 2, 1).value
    if ss == 0.0:
        return 0.0
    ph = _sign(f2 + i2 + j2 + j2p + n2 + s2 + 2)
    return ph * math.sqrt(_jj(i2) * _jj(s2) * (j2p + 1) * (j2 + 1)) * sj * ss


@lru_cache(maxsize=None)
def _dipolar(bra, ket) -> float:
    n2p, s2p, j2p, i2p, f2p, m2p = bra
    n2, s2, j2, i2, f2, m2 = ket
    if s2p != s2 or i2p != i2 or f2p != f2 or m2p != m2:
        return 0.0
    tj = wigner3j(n2p / 2, 2, n2 / 2, 0, 0, 0).value
    if tj == 0.0:
        return 0.0
    sj = wigner6j(i2 / 2, j2p / 2, f2 / 2, j2 / 2, i2 / 2, 1).value
    if sj == 0.0:
        return 0.0
    nj = wigner9j(n2p / 2, n2 / 2, 2, s2 / 2, s2 / 2, 1, j2p / 2, j2 / 2, 1).value
    if nj == 0.0:
        return 0.0
    ph = _sign(f2 + i2 + j2 + n2p + 2)
    rad = 30 * _jj(i2) * _jj(s2) * (j2p + 1) * (j2 + 1) * (n2 + 1) * (n2p + 1)
    return ph * math.sqrt(rad) * sj * nj * tj


@lru_cache(maxsize=None)
def _nuclear_rotation(bra, ket) -> float:
    n2p, s2p, j2p, i2p, f2p, m2p = bra
    n2, s2, j2, i2, f2, m2 = ket
    if n2p != n2 or s2p != s2 or i2p != i2 or f2p != f2 or m2p != m2 or n2 == 0:
        return 0.0
    s1 = wigner6j(j2 / 2, 1, j2p / 2, i2 / 2, f2 / 2, i2 / 2).value
    if s1 == 0.0:
        return 0.0
    s2j = wigner6j(n2 / 2, 1, n2 / 2, j2p / 2, s2 / 2, j2 / 2).value
    if s2j == 0.0:
        return 0.0
    # 2J, not J + J': the two differ by (-1)^(J - J') off the J diagonal, and only
    # 2J reproduces I.N built in a product basis
    ph = _sign(f2 + i2 + 2 * j2 + n2 + s2 + 2)
    return ph * math.sqrt(_jj(i2) * _jj(n2) * (j2p + 1) * (j2 + 1)) * s1 * s2j


@lru_cache(maxsize=None)
def _quadrupole(bra, ket, i1_2: int) -> float:
    n2p, s2p, j2p, i2p, f2p, m2p = bra
    n2, s2, j2, i2, f2, m2 = ket
    if s2p != s2 or f2p != f2 or m2p != m2:
        return 0.0
    proj = (_sign(i2) + _sign(i2p)) / 2
    if proj == 0:
        return 0.0
    tj = wigner3j(n2p / 2, 2, n2 / 2, 0, 0, 0).value
    if tj == 0.0:
        return 0.0
    a = wigner6j(i2p / 2, 2, i2 / 2, j2 / 2, f2 / 2, j2p / 2).value
    b = wigner6j(i1_2 / 2, 2, i1_2 / 2, i2 / 2, i1_2 / 2, i2p / 2).value
    c = wigner6j(n2p / 2, 2, n2 / 2, j2 / 2, s2 / 2, j2p / 2).value
    if a == 0.0 or b == 0.0 or c == 0.0:
        return 0.0
    norm = wigner3j(i1_2 / 2, 2, i1_2 / 2, -i1_2 / 2, 0, i1_2 / 2).value
    if norm == 0.0:
        raise ZeroDivisionError(f"quadrupole normalization vanishes for I1 = {i1_2}/2")
    # the two half-integer exponents only make sense summed
    ph = _sign(f2 + i2p + 2 * j2 + 2 * i1_2 + s2 + 2 * n2p)
    rad = (i2 + 1) * (i2p + 1) * (j2 + 1) * (j2p + 1) * (n2 + 1) * (n2p + 1)
    return 0.5 * proj * ph * math.sqrt(rad) * a * b * c * tj / norm


@lru_cache(maxsize=None)
def _zeeman(bra, ket) -> float:
    """Element of S_z-like operator; multiply by g * mu_B * B."""
    n2p, s2p, j2p, i2p, f2p, m2p = bra
    n2, s2, j2, i2, f2, m2 = ket
    if n2p != n2 or s2p != s2 or i2p != i2 or m2p != m2:
        return 0.0
    tj = wigner3j(f2p / 2, 1, f2 / 2, -m2p / 2, 0, m2 / 2).value
    if tj == 0.0:
        return 0.0
    a = wigner6j(f2p / 2, j2p / 2, i2 / 2, j2 / 2, f2 / 2, 1).value
    b = wigner6j(j2p / 2, s2 / 2, n2 / 2, s2 / 2, j2 / 2, 1).value
    if a == 0.0 or b == 0.0:
        return 0.0
    ph = _sign(f2p - m2p) * _sign(2 * j2p + n2 + s2 + f2 + i2)
    rad = (f2p + 1) * (f2 + 1) * (j2p + 1) * (j2 + 1) * _jj(s2)
    return ph * math.sqrt(rad) * tj * a * b


def _diag_rot(ket, params) -> float:
    nn = (ket[0] / 2) * (ket[0] / 2 + 1)
    return params.B_e * nn - params.D_e * nn * nn


def _diag_sr(ket, params) -> float:
    n, s, j = ket[0] / 2, ket[1] / 2, ket[2] / 2
    gamma_sr = params.gamma + params.gamma_N * n * (n + 1)
    return 0.5 * gamma_sr * (j * (j + 1) - n * (n + 1) - s * (s + 1))


def term_matrices(params: HamiltonianParams, basis) -> dict[str, np.ndarray]:
    """Every term of the Hamiltonian as a dense matrix in MHz.

    ``"Z"`` is ``dH/dB`` in MHz/T; all others are field independent.
    """
    _check_block(basis)
    kets = [st.twice for st in basis]
    d = len(kets)
    i1_2 = params.I1.twice_value
    out = {name: np.zeros((d, d)) for name in (*TERMS, "Z")}
    for a, bra in enumerate(kets):
        out["rot"][a, a] = _diag_rot(bra, params)
        out["sr"][a, a] = _diag_sr(bra, params)
        for b, ket in enumerate(kets):
            out["F"][a, b] = _fermi(bra, ket)
            out["dip"][a, b] = _dipolar(bra, ket)
            out["IN"][a, b] = _nuclear_rotation(bra, ket)
            out["eqQ"][a, b] = _quadrupole(bra, ket, i1_2)
            out["Z"][a, b] = _zeeman(bra, ket)
    out["F"] *= params.b_F
    out["dip"] *= params.c_dip
    out["IN"] *= params.c_I
    out["eqQ"] *= params.eqQ
    out["Z"] *= params.g * params.mu_B
    return out


def _split(params, basis):
    terms = term_matrices(params, basis)
    h0 = sum(terms[name] for name in TERMS)
    return h0, terms["Z"]


def assemble_hamiltonian(params: HamiltonianParams, B: float, basis) -> np.ndarray:
    """Hamiltonian matrix (E/h in MHz) at field ``B`` (tesla) in ``basis``."""
    if B < 0 or not math.isfinite(B):
        raise ValueError(f"B must be a finite non-negative field, got {B}")
    h0, dz = _split(params, basis)
    return h0 + B * dz


# -- diagonalization and tracking ----------------------------------------


def _m_blocks(n_max: int) -> list[int]:
    f2_max = 2 * n_max + 1 + 4
    return list(range(-f2_max, f2_max + 1, 2))


def _eig_resolved(h: np.ndarray, dz: np.ndarray):
    """eigh with every degenerate cluster rotated to diagonalize dH/dB.

    Returns (energies, vectors, slopes, degenerate_mask).
    """
    w, v = np.linalg.eigh(h)
    slopes = np.einsum("ij,ik,kj->j", v, dz, v)
    degen = np.zeros(len(w), dtype=bool)
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and w[stop] - w[stop - 1] < _DEGENERACY_TOL_MHZ:
            stop += 1
        if stop - start > 1:
            sub = v[:, start:stop]
            mu, rot = np.linalg.eigh(sub.T @ dz @ sub)
            v[:, start:stop] = sub @ rot
            slopes[start:stop] = mu
            degen[start:stop] = True
        start = stop
    return w, v, slopes, degen


def _label_from_vector(vec, kets) -> tuple[LevelLabel, float]:
    weights = vec**2
    k = int(np.argmax(weights))
    n2, _, j2, i2, f2, m2 = kets[k]
    return LevelLabel(n2, j2, i2, f2, m2), float(weights[k])


def _track_block(params, n_max, m2, b_grid):
    basis = build_basis(n_max, m_f=HalfInt(m2))
    if not basis:
        return []
    kets = [st.twice for st in basis]
    h0, dz = _split(params, basis)

    def solve(b):
        return _eig_resolved(h0 + b * dz, dz)

    workers = min(max_threads(), 8)
    if workers > 1 and len(b_grid) > 32:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(solve, b_grid))
    else:
        results = [solve(b) for b in b_grid]

    d = len(basis)
    energies = np.empty((len(b_grid), d))
    slopes = np.empty((len(b_grid), d))
    w0, v_prev, s0, _ = results[0]
    energies[0], slopes[0] = w0, s0
    for k in range(1, len(b_grid)):
        w, v, s, _ = results[k]
        overlap = (v_prev.T @ v) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        worst = overlap[rows, cols].min()
        if worst < 0.5:
            raise TrackingError(
                f"ambiguous level tracking in M_F={m2}/2 block between "
                f"B={b_grid[k - 1]:.6g} T and B={b_grid[k]:.6g} T (overlap {worst:.3f}); refine the grid"
            )
        order = cols[np.argsort(rows)]
        v_prev = v[:, order]
        energies[k] = w[order]
        slopes[k] = s[order]

    levels = []
    _, v0, _, _ = results[0]
    for col in range(d):
        label, purity = _label_from_vector(v0[:, col], kets)
        levels.append(
            ZeemanLevel(
                label=label,
                b_grid=np.asarray(b_grid, dtype=float).copy(),
                energies=energies[:, col].copy(),
                moments=slopes[:, col] / params.mu_B,
                purity=purity,
            )
        )
    return levels


def zeeman_map(params: HamiltonianParams, b_grid=None, n_max: int = 2, m_f=None) -> list[ZeemanLevel]:
    """Track every level of the ``n_max`` basis across ``b_grid`` (tesla).

    Levels are followed by greatest eigenvector overlap between neighbouring
    grid points and labelled by their dominant basis component at the first
    grid point. Raises :class:`TrackingError` when an assignment overlap
    drops below 0.5.
    """
    b_grid = DEFAULT_B_GRID if b_grid is None else np.asarray(b_grid, dtype=float)
    if b_grid.ndim != 1 or b_grid.size == 0:
        raise ValueError("b_grid must be a non-empty 1-d array")
    if b_grid[0] < 0 or np.any(np.diff(b_grid) <= 0):
        raise ValueError("b_grid must be strictly increasing and start at B >= 0")
    blocks = _m_blocks(n_max) if m_f is None else [HalfInt.of(m_f).twice_value]
    levels = []
    for m2 in blocks:
        levels.extend(_track_block(params, n_max, m2, b_grid))
    levels.sort(key=lambda lv: (lv.label, lv.energies[0]))
    return levels


def magnetic_moments(params: HamiltonianParams, B: float, n_max: int = 2, step_T: float = 1e-4) -> list[MomentEntry]:
    """Moments ``dE/dB`` of every level at field ``B``.

    Slopes come from the eigenvector expectation of ``dH/dB``. Zero-field
    labels are carried to ``B`` by tracking on a grid no coarser than
    ``step_T``. Within a degenerate cluster the slopes are the eigenvalues of
    ``dH/dB`` restricted to the cluster and the entries are flagged.
    """
    if B < 0 or not math.isfinite(B):
        raise ValueError(f"B must be a finite non-negative field, got {B}")
    n_pts = max(2, int(math.ceil(B / step_T)) + 1) if B > 0 else 1
    grid = np.linspace(0.0, B, n_pts)
    out = []
    for m2 in _m_blocks(n_max):
        basis = build_basis(n_max, m_f=HalfInt(m2))
        if not basis:
            continue
        kets = [st.twice for st in basis]
        h0, dz = _split(params, basis)
        w, v, s, degen = _eig_resolved(h0, dz)
        labels = [_label_from_vector(v[:, c], kets)[0] for c in range(len(w))]
        for b_prev, b in zip(grid[:-1], grid[1:]):
            w, v_new, s, degen = _eig_resolved(h0 + b * dz, dz)
            overlap = (v.T @ v_new) ** 2
            rows, cols = linear_sum_assignment(-overlap)
            if overlap[rows, cols].min() < 0.5:
                raise TrackingError(
                    f"ambiguous level tracking in M_F={m2}/2 block between B={b_prev:.6g} T and B={b:.6g} T"
                )
            order = cols[np.argsort(rows)]
            v, w, s, degen = v_new[:, order], w[order], s[order], degen[order]
        for c, label in enumerate(labels):
            out.append(
                MomentEntry(
                    label=label,
                    energy_MHz=float(w[c]),
                    mu_muB=float(s[c] / params.mu_B),
                    mu_MHz_per_T=float(s[c]),
                    degenerate=bool(degen[c]),
                )
            )
    out.sort(key=lambda e: e.label)
    return out


def distinguishability_report(moments, threshold: float = 0.1, floor_muB: float = 0.01):
    """Pairs of levels whose moments differ by less than ``threshold`` (relative).

    ``moments`` is a sequence of :class:`MomentEntry` or ``(label, mu)``
    pairs in Bohr magnetons. Returns ``(label_a, label_b, rel_diff)`` for
    every unordered pair that cannot be told apart at that accuracy.
    """
    items = []
    for m in moments:
        if isinstance(m, MomentEntry):
            items.append((m.label, m.mu_muB))
        else:
            label, mu = m
            items.append((label, float(mu)))
    if len(items) < 2:
        raise ValueError("need at least two levels")
    pairs = []
    for (la, ma), (lb, mb) in combinations(items, 2):
        rel = abs(ma - mb) / max(abs(ma), abs(mb), floor_muB)
        if rel < threshold:
            pairs.append((la, lb, rel))
    return pairs


# -- parameter files -------------------------------------------------------


def load_params(path, allow_unknown: bool = False) -> HamiltonianParams:
    """Read a Hamiltonian parameter file (JSON object, keys in :data:`PARAM_KEYS`)."""
    from qls.io import read_json_object

    raw = read_json_object(path)
    return params_from_dict(raw, allow_unknown=allow_unknown, source=str(path))


def params_from_dict(raw: dict, allow_unknown: bool = False, source: str = "<dict>") -> HamiltonianParams:
    from qls.io import InputError

    missing = [k for k in PARAM_KEYS if k not in raw]
    if missing:
        raise InputError(f"{source}: missing keys {missing}")
    extra = [k for k in raw if k not in PARAM_KEYS and k not in OPTIONAL_PARAM_KEYS]
    if extra and not allow_unknown:
        raise InputError(f"{source}: unknown keys {extra}")
    for k in (*PARAM_KEYS, *OPTIONAL_PARAM_KEYS):
        if k in raw and (isinstance(raw[k], bool) or not isinstance(raw[k], (int, float))):
            raise InputError(f"{source}: {k} must be a number")
    i1 = raw["I1_twice"]
    if not isinstance(i1, int) or i1 < 0:
        raise InputError(f"{source}: I1_twice must be a non-negative integer")
    return HamiltonianParams(
        B_e_cm1=raw["B_e_cm1"],
        D_e_cm1=raw["D_e_cm1"],
        gamma=raw["gamma_MHz"],
        gamma_N=raw["gamma_N_MHz"],
        b_F=raw["bF_MHz"],
        c_dip=raw["cdip_MHz"],
        c_I=raw["cI_MHz"],
        eqQ=raw["eqQ_MHz"],
        g=raw["g"],
        I1=HalfInt(i1),
        mu_B=raw.get("muB_MHz_per_T", MU_B_MHZ_PER_T),
    )


def params_to_dict(params: HamiltonianParams) -> dict:
    out = {
        "B_e_cm1": params.B_e_cm1,
        "D_e_cm1": params.D_e_cm1,
        "gamma_MHz": params.gamma,
        "gamma_N_MHz": params.gamma_N,
        "bF_MHz": params.b_F,
        "cdip_MHz": params.c_dip,
        "cI_MHz": params.c_I,
        "eqQ_MHz": params.eqQ,
        "g": params.g,
        "I1_twice": params.I1.twice_value,
    }
    if params.mu_B != MU_B_MHZ_PER_T:
        out["muB_MHz_per_T"] = params.mu_B
    return out


def zeeman_rows(levels):
    for lv in levels:
        for b, e, mu in zip(lv.b_grid, lv.energies, lv.moments):
            yield (repr(float(b)), str(lv.label), repr(float(e)), repr(float(mu)))


def write_zeeman_csv(levels, path) -> None:
    from qls.io import write_csv

    write_csv(path, ("B_T", "label", "E_MHz", "mu_muB"), zeeman_rows(levels))
