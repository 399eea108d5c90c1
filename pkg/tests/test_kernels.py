"""Backend agreement tests: compiled kernels against the pure reference.

The package selects the compiled backend at import when available, so the
rest of the suite exercises it implicitly; these tests pin the two
implementations against each other point by point, and validate the
compiled one against closed-form identities on its own.
"""

import os
import subprocess
import sys

import numpy as np
import pytest

from plasmonchain import _kernels
from plasmonchain._kernels import _ref

_core = pytest.importorskip(
    "plasmonchain._kernels._core",
    reason="compiled kernel backend not built",
)


def argument_batch() -> np.ndarray:
    rng = np.random.default_rng(7)
    z = rng.uniform(0.05, 30.0, 400) + 1j * rng.uniform(-8.0, 8.0, 400)
    special = [0.0 + 0.0j, 1e-8 + 0.0j, 1.9999 + 0.0j, 2.0 + 0.0j,
               2.0001 + 0.0j, 25.0 - 6.0j, 0.3 + 7.5j]
    return np.concatenate([z, special])


class TestBackendSelection:
    def test_compiled_backend_active(self):
        assert _kernels.BACKEND == "cython"
        assert _kernels.sph_jn_table is _core.sph_jn_table

    def test_env_var_forces_pure_backend(self):
        env = dict(os.environ, PLASMONCHAIN_PURE="1")
        out = subprocess.run(
            [sys.executable, "-c",
             "import plasmonchain._kernels as k; print(k.BACKEND)"],
            env=env, capture_output=True, text=True, check=True,
        )
        assert out.stdout.strip() == "python"


class TestAgreement:
    @pytest.mark.parametrize("lmax", [0, 1, 4, 9])
    def test_jn(self, lmax):
        z = argument_batch()
        j_ref, jp_ref = _ref.sph_jn_table(lmax, z)
        j_c, jp_c = _core.sph_jn_table(lmax, z)
        assert j_c.shape == j_ref.shape == (lmax + 1, z.size)
        np.testing.assert_allclose(j_c, j_ref, rtol=1e-12, atol=1e-300)
        np.testing.assert_allclose(jp_c, jp_ref, rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("lmax", [0, 1, 4, 9])
    def test_yn(self, lmax):
        z = argument_batch()
        z = z[np.abs(z) > 0.04]
        y_ref, yp_ref = _ref.sph_yn_table(lmax, z)
        y_c, yp_c = _core.sph_yn_table(lmax, z)
        # Near real-axis zeros of y_l a one-ulp difference in the complex
        # trig seeds is amplified in relative terms; allow a per-row
        # absolute floor tied to the row scale.
        for a, b in ((y_ref, y_c), (yp_ref, yp_c)):
            floor = 1e-13 * np.abs(a).max(axis=1, keepdims=True)
            assert (np.abs(b - a) <= 1e-10 * np.abs(a) + floor).all()

    @pytest.mark.parametrize("m", range(9))
    def test_legendre(self, m):
        t = np.linspace(0.0, np.pi, 257)  # includes both poles
        ct, st = np.cos(t), np.sin(t)
        ref = _ref.legendre_pmt_table(8, m, ct, st)
        core = _core.legendre_pmt_table(8, m, ct, st)
        for a, b in zip(ref, core):
            assert b.shape == a.shape == (9, t.size)
            scale = np.abs(a).max() + 1e-300
            assert np.max(np.abs(b - a)) <= 1e-14 * scale

    def test_legendre_m_above_lmax_zero(self):
        t = np.linspace(0.1, 3.0, 11)
        for arr in _core.legendre_pmt_table(3, 5, np.cos(t), np.sin(t)):
            assert not arr.any()


class TestCompiledIdentities:
    """Closed-form checks run on the compiled backend alone."""

    def test_cross_product_identity(self):
        # j_l(z) y_l'(z) - j_l'(z) y_l(z) = 1/z^2 for every order.
        rng = np.random.default_rng(11)
        z = rng.uniform(0.2, 20.0, 200) + 1j * rng.uniform(-4.0, 4.0, 200)
        j, jp = _core.sph_jn_table(6, z)
        y, yp = _core.sph_yn_table(6, z)
        np.testing.assert_allclose(j * yp - jp * y,
                                   np.broadcast_to(1.0 / z**2, j.shape),
                                   rtol=1e-10)

    def test_jn_at_origin(self):
        j, jp = _core.sph_jn_table(3, np.array([0.0 + 0.0j]))
        assert j[0, 0] == 1.0 and not j[1:, 0].any()
        assert jp[1, 0] == pytest.approx(1.0 / 3.0)
        assert jp[0, 0] == 0.0 and not jp[2:, 0].any()

    def test_yn_rejects_origin(self):
        with pytest.raises(ValueError):
            _core.sph_yn_table(2, np.array([1.0 + 0.0j, 0.0 + 0.0j]))

    def test_small_argument_asymptotics(self):
        # j_l(z) -> z^l / (2l+1)!! as z -> 0.
        z = np.array([1e-3 + 1e-3j])
        j, _ = _core.sph_jn_table(4, z)
        dfac = 1.0
        for ell in range(5):
            if ell:
                dfac *= 2 * ell + 1
            np.testing.assert_allclose(j[ell, 0], z[0]**ell / dfac, rtol=1e-6)

    def test_legendre_dipole_rows(self):
        # l = 1: P_1^0 = cos t, tau_1^0 = -sin t; P_1^1 = sin t, pi = 1,
        # tau = cos t.
        t = np.linspace(0.0, np.pi, 33)
        ct, st = np.cos(t), np.sin(t)
        P0, _, tau0 = _core.legendre_pmt_table(1, 0, ct, st)
        np.testing.assert_allclose(P0[1], ct, atol=1e-15)
        np.testing.assert_allclose(tau0[1], -st, atol=1e-15)
        P1, pi1, tau1 = _core.legendre_pmt_table(1, 1, ct, st)
        np.testing.assert_allclose(P1[1], st, atol=1e-15)
        np.testing.assert_allclose(pi1[1], 1.0, atol=1e-15)
        np.testing.assert_allclose(tau1[1], ct, atol=1e-15)
