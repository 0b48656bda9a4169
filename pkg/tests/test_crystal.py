import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants as sc

from qls.constants import HBAR
from qls.crystal import (IonPair, IonSpecies, hessian, load_species, modal_forces, mode_ratios,
                         normal_modes, project_forces, species_from_dict)
from qls.io import InputError, data_path

CA = IonSpecies("Ca+", 39.962591)
N2 = IonSpecies("N2+", 28.0056)
W = 2 * math.pi * 574e3


def _coulomb_hessian(m_c, omega, h_rel=1e-4):
    """Finite-difference curvature of the real two-ion potential at equilibrium."""
    k = m_c * omega**2
    q2 = sc.e**2 / (4 * math.pi * sc.epsilon_0)
    d = (2 * q2 / k) ** (1 / 3)  # equilibrium separation
    x0 = np.array([-d / 2, d / 2])

    def V(x):
        return 0.5 * k * (x[0] ** 2 + x[1] ** 2) + q2 / (x[1] - x[0])

    step = h_rel * d
    H = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            e_i, e_j = np.eye(2)[i] * step, np.eye(2)[j] * step
            H[i, j] = (V(x0 + e_i + e_j) - V(x0 + e_i - e_j) - V(x0 - e_i + e_j) + V(x0 - e_i - e_j)) / (4 * step**2)
    return H


def test_hessian_matches_coulomb_potential():
    pair = IonPair(CA, N2, W)
    num = _coulomb_hessian(CA.mass_kg, W)
    np.testing.assert_allclose(hessian(pair), num, rtol=1e-5)


@pytest.mark.parametrize("mu", [0.1, 0.5, 0.70081, 1.0, 1.3, 4.0, 30.0])
def test_mode_ratios_match_generalized_eigenproblem(mu):
    K = np.array([[2.0, -1.0], [-1.0, 2.0]])
    M = np.diag([1.0, mu])
    lam = np.sort(np.linalg.eigvals(np.linalg.solve(M, K)).real)
    r_com, r_str = mode_ratios(mu)
    assert r_com == pytest.approx(math.sqrt(lam[0]), rel=1e-13)
    assert r_str == pytest.approx(math.sqrt(lam[1]), rel=1e-13)


def test_equal_masses():
    assert mode_ratios(1.0) == pytest.approx((1.0, math.sqrt(3.0)), rel=1e-15)


def test_reference_ratios_at_mu_0700():
    c, s = mode_ratios(0.700)
    assert c == pytest.approx(1.0765, abs=5e-5)
    assert s == pytest.approx(1.9231, abs=5e-5)


def test_ratios_at_shipped_masses():
    pair = IonPair(load_species(data_path("species", "ca40.json")), load_species(data_path("species", "n2plus.json")), W)
    m = normal_modes(pair)
    assert pair.mu == pytest.approx(0.70081, abs=1e-5)
    assert m.omega_com / W == pytest.approx(1.076283, abs=1e-6)
    assert m.omega_str / W == pytest.approx(1.922356, abs=1e-6)


def test_eigenvectors_orthonormal_and_eigen():
    pair = IonPair(CA, N2, W)
    m = normal_modes(pair)
    masses = np.array([CA.mass_kg, N2.mass_kg])
    dyn = hessian(pair) / np.sqrt(np.outer(masses, masses))
    V = np.stack([m.eigvec_com, m.eigvec_str])
    np.testing.assert_allclose(V @ V.T, np.eye(2), atol=1e-14)
    for v, w in ((m.eigvec_com, m.omega_com), (m.eigvec_str, m.omega_str)):
        np.testing.assert_allclose(dyn @ v, w * w * v, rtol=1e-12)
    # com: both ions in phase; stretch: out of phase
    assert np.all(m.eigvec_com > 0)
    assert m.eigvec_str[0] * m.eigvec_str[1] < 0


def test_length_scales():
    pair = IonPair(CA, N2, W)
    m = normal_modes(pair)
    M = CA.mass_kg + N2.mass_kg
    red = CA.mass_kg * N2.mass_kg / M
    assert m.a2 == pytest.approx(HBAR / (M * W), rel=1e-15)
    assert m.a_com == pytest.approx(math.sqrt(HBAR / (M * m.omega_com)), rel=1e-15)
    assert m.a_str == pytest.approx(math.sqrt(HBAR / (red * m.omega_str)), rel=1e-15)


def test_project_forces_formula():
    pair = IonPair(CA, N2, W)
    fc, ft = 3.0, -2.0
    com, st_ = project_forces(fc, ft, pair)
    assert com == pytest.approx(HBAR * (fc + ft), rel=1e-15)
    m1, m2 = CA.mass, N2.mass
    assert st_ == pytest.approx(HBAR * (m2 * fc - m1 * ft) / (m1 + m2), rel=1e-14)


def test_modal_forces_equal_masses():
    pair = IonPair(CA, CA, W)
    fcom, fstr = modal_forces(1.0, 1.0, pair)
    # equal pushes do not drive the stretch mode
    assert abs(fstr) < 1e-12 * abs(fcom)
    fcom, fstr = modal_forces(1.0, -1.0, pair)
    assert abs(fcom) < 1e-12 * abs(fstr)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 20.0))
def test_mode_ratio_properties(mu):
    c, s = mode_ratios(mu)
    assert 0 < c < s
    # product and sum of squared eigenvalues of M^-1 K
    assert (c * s) ** 2 == pytest.approx(3.0 / mu, rel=1e-12)
    assert c * c + s * s == pytest.approx(2.0 + 2.0 / mu, rel=1e-12)
    # swapping which ion is lighter rescales by the reference mass
    c2, s2 = mode_ratios(1.0 / mu)
    assert c2 == pytest.approx(c * math.sqrt(mu), rel=1e-12)
    assert s2 == pytest.approx(s * math.sqrt(mu), rel=1e-12)


def test_invalid_species_and_pairs():
    with pytest.raises(ValueError):
        IonSpecies("x", -1.0)
    with pytest.raises(ValueError):
        IonSpecies("x", 10.0, charge=2)
    with pytest.raises(ValueError):
        IonSpecies("x", 10.0, wavelength=397e-9)
    with pytest.raises(ValueError):
        IonPair(CA, N2, 0.0)
    with pytest.raises(ValueError):
        mode_ratios(0.0)


def test_species_from_dict_strict():
    good = {"name": "Ca+", "mass_u": 39.96, "charge_e": 1, "lambda_nm": 397.0, "gamma_2pi_MHz": 21.6}
    s = species_from_dict(good)
    assert s.wavelength == pytest.approx(397e-9)
    assert s.linewidth == pytest.approx(2 * math.pi * 21.6e6)
    with pytest.raises(InputError):
        species_from_dict({**good, "mass_amu": 1.0})
    assert species_from_dict({**good, "mass_amu": 1.0}, allow_unknown=True).mass == 39.96
    with pytest.raises(InputError):
        species_from_dict({"name": "x", "mass_u": 1.0})
    with pytest.raises(InputError):
        species_from_dict({**good, "mass_u": "40"})
    with pytest.raises(InputError):
        species_from_dict({**good, "charge_e": True})
    with pytest.raises(InputError):
        species_from_dict({**good, "charge_e": 2})


def test_load_species_rejects_duplicate_keys(tmp_path):
    p = tmp_path / "dup.json"
    p.write_text('{"name": "a", "mass_u": 1, "mass_u": 2, "charge_e": 1}')
    with pytest.raises(InputError):
        load_species(p)


def test_shipped_species_files():
    for name in ("ca40.json", "n2plus.json"):
        raw = json.loads(data_path("species", name).read_text())
        assert load_species(data_path("species", name)).mass == raw["mass_u"]
