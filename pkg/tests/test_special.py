"""Tests for spherical Bessel/Hankel functions and tesseral harmonics.

The in-house recurrence/series implementations are checked three ways:
against scipy.special's half-integer Bessel functions, against values
precomputed with 50-digit arithmetic (mpmath), and against closed-form
identities (Wronskian, far-field asymptotics, angular-gradient norm).
"""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp_special

from plasmonchain.special import (
    AngularIndex,
    bessel_radial_identity_check,
    sph_bessel_j,
    sph_bessel_y,
    sph_hankel2,
    tesseral_Y,
    tesseral_theta_tables,
)

# ---------------------------------------------------------------------------
# Frozen oracle values, precomputed with 50-digit arithmetic (mpmath):
#   j/y via sqrt(pi/2z) * J_{l+1/2}(z), h2 = j - i y,
#   derivatives via f' = f_{l-1} - (l+1)/z f.
# ---------------------------------------------------------------------------
FROZEN_BESSEL = {
    ("j", 2, (1 + 1j)): (0.019015560570510053 + 0.13227574886180912j),
    ("j", 5, (3 - 2j)): (-0.03826973982196613 - 0.030589563656576335j),
    ("j", 1, (0.01 + 0j)): (0.0033333000001190475 + 0j),
    ("j", 4, (25 + 4j)): (0.4152047691402001 + 0.9316336923752337j),
    ("y", 1, (0.3 + 0j)): (-11.5999172347112 + 0j),
    ("y", 3, (2 - 1j)): (-0.2083306943325932 - 0.7909060489529309j),
    ("h2", 1, (0.17 - 0.002j)): (-0.757522759704108 + 35.08344468840186j),
    ("h2", 3, (2 - 0.5j)): (-0.7919168688245724 + 0.9125939282004055j),
    ("h2", 2, (40 - 3j)): (-0.000931222381850193 + 0.0008328191885576959j),
}
FROZEN_BESSEL_DERIV = {
    ("j", 2, (1 + 1j)): (0.16812883355974734 + 0.09219479230206984j),
    ("h2", 3, (2 - 0.5j)): (1.8029432426566288 - 0.8014034675593108j),
}
# Tesseral values for the same convention, via (-1)^m * mpmath.legenp.
FROZEN_TESSERAL = {
    (1, 0, 0.7, 1.1): 0.3737038139165246,
    (2, 1, 0.7, 1.1): 0.24418248494748687,
    (3, -2, 2.0, 0.4): -0.3567410069085584,
    (4, 4, 1.2, 2.5): -0.3962742422369004,
}

_FUNCS = {"j": sph_bessel_j, "y": sph_bessel_y, "h2": sph_hankel2}


@pytest.mark.parametrize("key,expected", sorted(FROZEN_BESSEL.items(), key=str))
def test_bessel_frozen_values(key, expected):
    kind, ell, z = key
    got = _FUNCS[kind](ell, z)
    assert got == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("key,expected", sorted(FROZEN_BESSEL_DERIV.items(), key=str))
def test_bessel_frozen_derivatives(key, expected):
    kind, ell, z = key
    got = _FUNCS[kind](ell, z, derivative=True)
    assert got == pytest.approx(expected, rel=1e-12)


def _scipy_sph(kind, ell, z):
    z = np.asarray(z, complex)
    bess = sp_special.jv if kind == "j" else sp_special.yv
    return np.sqrt(np.pi / (2 * z)) * bess(ell + 0.5, z)


def test_bessel_vs_scipy_sweep():
    rng = np.random.default_rng(7)
    for mag in [1e-3, 0.3, 1.9, 2.1, 8.0, 60.0, 300.0, 1000.0]:
        # both branches of the series/recurrence switch, all four quadrants;
        # |Im z| capped so e^{|Im z|} stays comfortably inside double range
        phases = rng.uniform(-np.pi, np.pi, 25)
        z = mag * np.exp(1j * phases)
        z = z.real + 1j * np.clip(z.imag, -25.0, 25.0)
        for ell in [0, 1, 3, 7]:
            got = sph_bessel_j(ell, z)
            ref = _scipy_sph("j", ell, z)
            np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-300)
            got = sph_bessel_y(ell, z)
            ref = _scipy_sph("y", ell, z)
            np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-300)


def test_bessel_series_recurrence_seam():
    # values must agree across the internal |z| switch point
    for z in [2.0 - 1e-9j, 2.0 + 1e-9j, (1.99 + 0.1j), (2.01 + 0.1j)]:
        for ell in range(6):
            a = sph_bessel_j(ell, complex(z) * 0.999999)
            b = sph_bessel_j(ell, complex(z) * 1.000001)
            assert abs(a - b) <= 1e-5 * max(abs(a), abs(b))


def test_j_at_zero_argument():
    assert sph_bessel_j(0, 0.0) == pytest.approx(1.0)
    assert sph_bessel_j(2, 0.0) == 0.0
    assert sph_bessel_j(1, 0.0, derivative=True) == pytest.approx(1 / 3)
    assert sph_bessel_j(3, 0.0, derivative=True) == 0.0
    with pytest.raises(ValueError):
        sph_bessel_y(1, 0.0)


@settings(max_examples=200, deadline=None)
@given(
    ell=st.integers(min_value=0, max_value=10),
    mag=st.floats(min_value=0.05, max_value=50.0),
    phase=st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_wronskian_property(ell, mag, phase):
    # j_l(z) h2_l'(z) - j_l'(z) h2_l(z) = -i / z^2 everywhere.
    # |Im z| is capped at 5: the products grow like e^(2|Im z|) while the
    # result stays ~1/|z|^2, so beyond that the identity itself is too
    # ill-conditioned in double precision for a 1e-10 check.
    z = complex(mag * math.cos(phase), mag * math.sin(phase))
    z = complex(z.real, max(-5.0, min(5.0, z.imag)))
    if abs(z) < 0.05:
        z += 0.1
    w = sph_bessel_j(ell, z) * sph_hankel2(ell, z, derivative=True) - sph_bessel_j(
        ell, z, derivative=True
    ) * sph_hankel2(ell, z)
    assert w == pytest.approx(-1j / z**2, rel=1e-10)


@pytest.mark.parametrize("ell", [0, 1, 2, 3, 4])
def test_hankel2_far_field_asymptotics(ell):
    """h2_l(x) -> i^(l+1) e^(-ix)/x * (1 - i l(l+1)/(2x)) at large |x|.

    The first omitted term of the expansion is a2/x^2 with
    a2 = (l-1) l (l+1) (l+2) / 8, so at |x| = 50 (l+1) the two-term form
    is accurate to ~1e-4 only for l <= 1; for larger l we assert the
    theory-justified bound 1.2 * a2/|x|^2.
    """
    x = 50.0 * (ell + 1)
    for z in [x + 0.0j, x * np.exp(-0.05j), x * np.exp(0.05j)]:
        got = sph_hankel2(ell, z)
        asym = 1j ** (ell + 1) * np.exp(-1j * z) / z * (1 - 1j * ell * (ell + 1) / (2 * z))
        rel = abs(got - asym) / abs(got)
        if ell <= 1:
            assert rel < 1e-4
        else:
            a2 = (ell - 1) * ell * (ell + 1) * (ell + 2) / 8.0
            assert rel < max(1.2 * a2 / abs(z) ** 2, 1e-9)
            assert rel < 1e-3


def test_angular_index_validation():
    AngularIndex(3, -3)
    with pytest.raises(ValueError):
        AngularIndex(2, 3)
    with pytest.raises(ValueError):
        AngularIndex(-1, 0)


@pytest.mark.parametrize("key,expected", sorted(FROZEN_TESSERAL.items()))
def test_tesseral_frozen_values(key, expected):
    ell, m, theta, phi = key
    assert tesseral_Y(AngularIndex(ell, m), theta, phi) == pytest.approx(expected, rel=1e-12)


def test_tesseral_vs_scipy_lpmv():
    # scipy's lpmv includes the Condon-Shortley phase; ours does not.
    rng = np.random.default_rng(3)
    ct = rng.uniform(-0.999, 0.999, 40)
    theta = np.arccos(ct)
    phi = rng.uniform(0, 2 * np.pi, 40)
    for ell in range(0, 6):
        for m in range(-ell, ell + 1):
            am = abs(m)
            if m > 0:
                az = np.cos(m * phi)
            elif m == 0:
                az = np.ones_like(phi)
            else:
                az = np.sin(am * phi)
            if am == 0:
                nrm = math.sqrt((2 * ell + 1) / (4 * math.pi))
            else:
                nrm = math.sqrt(
                    (2 * ell + 1)
                    / (2 * math.pi)
                    * math.factorial(ell - am)
                    / math.factorial(ell + am)
                )
            ref = nrm * (-1.0) ** am * sp_special.lpmv(am, ell, ct) * az
            got = tesseral_Y(AngularIndex(ell, m), theta, phi)
            np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)


def _sphere_quadrature(n_t=80, n_p=80):
    x, w = np.polynomial.legendre.leggauss(n_t)
    theta = np.arccos(x)
    phi = np.linspace(0, 2 * np.pi, n_p, endpoint=False)
    wphi = 2 * np.pi / n_p
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.broadcast_to(w[:, None] * wphi, T.shape)
    return T, P, W


def test_tesseral_orthonormality():
    T, P, W = _sphere_quadrature()
    idxs = [AngularIndex(l, m) for l in range(0, 5) for m in range(-l, l + 1)]
    vals = [tesseral_Y(i, T, P) for i in idxs]
    for a, va in enumerate(vals):
        for b in range(a, len(vals)):
            ip = np.sum(W * va * vals[b])
            assert ip == pytest.approx(1.0 if a == b else 0.0, abs=1e-10)


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_angular_gradient_norm_identity(ell):
    # integral over the sphere of |grad_angular Y|^2 equals l(l+1)
    T, P, W = _sphere_quadrature()
    for m in range(-ell, ell + 1):
        Y, dYt, dYp = tesseral_Y(AngularIndex(ell, m), T, P, derivatives=True)
        val = np.sum(W * (dYt**2 + (dYp / np.sin(T)) ** 2))
        assert val == pytest.approx(ell * (ell + 1), abs=1e-8)


def test_tesseral_theta_tables_match_pointwise():
    theta = np.array([1e-9, 0.4, 1.2, np.pi / 2, 2.4, np.pi - 1e-9])
    for m in [0, 1, 3]:
        T, dT, Ts = tesseral_theta_tables(6, m, np.cos(theta), np.sin(theta))
        assert np.isfinite(T).all() and np.isfinite(dT).all() and np.isfinite(Ts).all()
        for ell in range(m, 7):
            # against the scalar API at phi = 0 (cos(m*0) = 1 azimuth)
            idx = AngularIndex(ell, m)
            Y, dYt, _ = tesseral_Y(idx, theta, np.zeros_like(theta), derivatives=True)
            np.testing.assert_allclose(T[ell], Y, rtol=0, atol=1e-13)
            np.testing.assert_allclose(dT[ell], dYt, rtol=0, atol=1e-12)
        if m >= 1:
            inner = slice(1, -1)  # away from the poles, compare against ratio
            for ell in range(m, 7):
                np.testing.assert_allclose(
                    Ts[ell][inner],
                    T[ell][inner] / np.sin(theta[inner]),
                    rtol=1e-12,
                )


def test_radial_identity_check_real_k():
    res = bessel_radial_identity_check(1, 1.0, 0.1, 2.0)
    assert res < 1e-7


def test_radial_identity_check_complex_k():
    # |Im(k) * r_hi| < 5 keeps the exponential growth representable
    res = bessel_radial_identity_check(2, 1.5 - 0.8j, 0.2, 3.0, kind="h2")
    assert res < 1e-5
    res = bessel_radial_identity_check(3, 0.8 + 0.4j, 0.5, 4.0, kind="j")
    assert res < 1e-5


def test_radial_identity_check_conditioning_warning():
    # j_1 has a zero near x = 4.4934; a narrow interval around it keeps the
    # integrand ~0 while the antiderivative endpoints stay O(1), so the
    # endpoint difference nearly cancels
    lo, hi = 4.4934094579 - 0.02, 4.4934094579 + 0.02
    with pytest.warns(UserWarning, match="cancel"):
        bessel_radial_identity_check(1, 1.0, lo, hi)
