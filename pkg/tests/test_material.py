"""Tests for Drude materials, the modified dielectric, and presets."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmonchain.material import (
    UNITS,
    Background,
    DrudeMaterial,
    eps_in,
    get_preset,
    load_presets,
    sigma,
    wavenumbers,
)

SILVER = DrudeMaterial(eps_inf=5.0, omega_p=8.9, gamma_s=0.1)


def test_eps_values():
    # hand-evaluated: eps(3) = 5 - 8.9^2/(9 - 0.3i) = 5 - 79.21*(9+0.3i)/81.09
    w = 3.0
    denom = w * w + 0.1**2
    expected = 5 - 79.21 * (w * w + 1j * 0.1 * w) / (w * w * denom / 1)  # simplify below
    got = eps_in(SILVER, w)
    direct = 5 - 79.21 / (w**2 - 1j * 0.1 * w)
    assert got == pytest.approx(direct, rel=1e-15)
    # absorbing for real frequency in the exp(+iwt) convention: Im eps < 0
    assert got.imag < 0


def test_eps_lossless_is_real_on_real_axis():
    ideal = DrudeMaterial(eps_inf=1.0, omega_p=8.9, gamma_s=0.0)
    val = ideal.eps(5.138)
    assert val.imag == 0.0
    # resonant at eps = -2: w = w_p / sqrt(3)
    assert ideal.eps(8.9 / math.sqrt(3)) == pytest.approx(-2.0, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    re=st.floats(min_value=0.2, max_value=12.0),
    im=st.floats(min_value=-3.0, max_value=3.0),
    gamma=st.floats(min_value=0.0, max_value=0.8),
)
def test_eps_reality_condition(re, im, gamma):
    # conj(eps(w)) == eps(-conj(w)) for every Drude material
    mat = DrudeMaterial(eps_inf=4.0, omega_p=9.0, gamma_s=gamma)
    w = complex(re, im)
    lhs = np.conj(mat.eps(w))
    rhs = mat.eps(-np.conj(w))
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_sigma_matches_derivative_definition():
    # sigma = (1/2w) d/dw [w^2 eps(w)] via central differences (analytic f)
    for mat in [SILVER, DrudeMaterial(2.0, 7.0, 0.35)]:
        for w in [2.5 + 0.1j, 3.3468 + 0.0519j, 1.2 - 0.4j, 6.0 + 0.0j]:
            h = 1e-5
            num = (
                ((w + h) ** 2 * mat.eps(w + h) - (w - h) ** 2 * mat.eps(w - h))
                / (2 * h)
                / (2 * w)
            )
            assert mat.sigma(w) == pytest.approx(num, rel=1e-8)


def test_sigma_limits():
    assert DrudeMaterial(3.5, 9.0, 0.0).sigma(2.7) == 3.5
    assert Background(2.25).sigma(1.0 + 0.5j) == 2.25
    assert sigma(Background(), 3.0) == 1.0


def test_wavenumbers():
    k_in, k_out = wavenumbers(SILVER, Background(1.0), 3.3468 + 0.0519j)
    w = 3.3468 + 0.0519j
    assert k_out == pytest.approx(w / 197.3269804, rel=1e-12)
    assert k_in == pytest.approx(w / 197.3269804 * np.sqrt(SILVER.eps(w)), rel=1e-12)
    # metallic interior: k_in is dominantly imaginary below the plasma edge
    assert abs(k_in.imag) > abs(k_in.real)


def test_units_thz():
    assert UNITS.to_thz(1.0) == pytest.approx(241.799)


def test_material_validation():
    with pytest.raises(ValueError):
        DrudeMaterial(0.5, 8.9, 0.1)
    with pytest.raises(ValueError):
        DrudeMaterial(1.0, -1.0, 0.0)
    with pytest.raises(ValueError):
        DrudeMaterial(1.0, 8.9, -0.1)
    with pytest.warns(UserWarning, match="overdamped"):
        mat = DrudeMaterial(1.0, 8.9, 1.0)
    assert mat.high_damping
    assert not SILVER.high_damping


def test_background_validation():
    with pytest.raises(ValueError):
        Background(0.0)
    with pytest.warns(UserWarning, match="unphysical"):
        Background(0.5)
    Background(2.25)  # silica-like host is fine


def test_presets_builtin():
    presets = load_presets()
    assert set(presets) >= {"silver", "darkmode"}
    ag = presets["silver"]
    assert (ag.eps_inf, ag.omega_p, ag.gamma_s) == (5.0, 8.9, 0.1)
    dm = presets["darkmode"]
    assert (dm.eps_inf, dm.omega_p, dm.gamma_s) == (1.0, 10.918, 0.0)
    assert get_preset("silver") == ag


def test_presets_custom_file(tmp_path):
    f = tmp_path / "mats.toml"
    f.write_text("[gold_like]\neps_inf = 9.0\nomega_p_eV = 8.5\ngamma_s_eV = 0.07\n")
    presets = load_presets(f)
    assert presets["gold_like"].eps_inf == 9.0
    with pytest.raises(KeyError, match="unknown material preset"):
        get_preset("silver", f)


def test_presets_missing_field(tmp_path):
    f = tmp_path / "bad.toml"
    f.write_text("[x]\neps_inf = 2.0\n")
    with pytest.raises(ValueError, match="missing field"):
        load_presets(f)


def test_quasistatic_dipole_frequency():
    ideal = DrudeMaterial(1.0, 8.9, 0.0)
    assert ideal.quasistatic_dipole_frequency == pytest.approx(8.9 / math.sqrt(3), rel=1e-12)
