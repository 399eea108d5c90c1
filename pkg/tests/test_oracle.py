"""Exact boundary-matching oracle tests.

The oracle is the package's independent referee for the coupled-mode
results, so its own tests lean on cross-module consistency: dips of the
matching matrix's smallest singular value must reproduce the isolated
sphere's eigenfrequencies, be invariant under rigid rotation, and be
insensitive to discretization choices (azimuthal basis, surface point
count).
"""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from plasmonchain.material import DrudeMaterial
from plasmonchain.oracle_exact import (
    OracleProblem,
    fibonacci_sphere,
    find_resonances,
)
from plasmonchain.sphere_qnm import SphereGeometry

SILVER = DrudeMaterial(5.0, 8.9, 0.1)
# frozen dipole eigenfrequency of the isolated 10 nm silver sphere
W0_10 = 3.346772017805 + 0.051886429377j
# frozen touching-free coupling at d = 4a (quadrature pipeline value)
KAPPA_10_D4 = -0.027654680 + 0.002191154j
RADIUS = 10.0
WINDOW = (3.25 + 0.02j, 3.45 + 0.10j)


def make_dimer(d_over_a: float, **kwargs) -> OracleProblem:
    d = d_over_a * RADIUS
    return OracleProblem(
        spheres=(
            SphereGeometry(radius=RADIUS, center=(0.0, 0.0, 0.0)),
            SphereGeometry(radius=RADIUS, center=(0.0, 0.0, d)),
        ),
        material=SILVER,
        **kwargs,
    )


@pytest.fixture(scope="module")
def single_resonances():
    pb = OracleProblem(
        spheres=(SphereGeometry(radius=RADIUS, center=(0.0, 0.0, 0.0)),),
        material=SILVER,
        ell_max=3,
    )
    return find_resonances(pb, WINDOW, grid=(10, 8), check_convergence=False)


@pytest.fixture(scope="module")
def dimer4_resonances():
    pb = make_dimer(4.0, ell_max=2)
    return find_resonances(pb, WINDOW, grid=(12, 8), check_convergence=False)


class TestFibonacciSphere:
    def test_unit_vectors(self):
        pts = fibonacci_sphere(200)
        assert pts.shape == (200, 3)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)

    def test_near_uniform_spacing(self):
        pts = fibonacci_sphere(100)
        d2 = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        d2[np.diag_indices(100)] = np.inf
        # ideal nearest-neighbor spacing ~ sqrt(4 pi / n) = 0.354
        assert d2.min() > 0.15

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            fibonacci_sphere(0)


class TestProblemValidation:
    def test_sphere_count(self):
        s = SphereGeometry(radius=1.0, center=(0, 0, 0))
        with pytest.raises(ValueError, match="one or two"):
            OracleProblem(spheres=(s, s, s), material=SILVER)

    @pytest.mark.parametrize("ell_max", [1, 9])
    def test_ell_max_range(self, ell_max):
        s = SphereGeometry(radius=1.0, center=(0, 0, 0))
        with pytest.raises(ValueError, match="ell_max"):
            OracleProblem(spheres=(s,), material=SILVER, ell_max=ell_max)

    def test_m_set(self):
        s = SphereGeometry(radius=1.0, center=(0, 0, 0))
        with pytest.raises(ValueError, match="m_set"):
            OracleProblem(spheres=(s,), material=SILVER, m_set=())
        with pytest.raises(ValueError, match="exceeds ell_max"):
            OracleProblem(spheres=(s,), material=SILVER, ell_max=2, m_set=(3,))

    def test_overlap(self):
        with pytest.raises(ValueError, match="overlap"):
            make_dimer(1.5)

    def test_frame_must_be_rotation(self):
        bad = ((1.0, 0.0, 0.0), (0.0, 2.0, 0.0), (0.0, 0.0, 1.0))
        with pytest.raises(ValueError, match="rotation"):
            make_dimer(4.0, frame=bad)


class TestAssembly:
    def test_shape_and_overdetermination(self):
        pb = make_dimer(4.0, ell_max=2)
        n_pts = 2 * pb.n_columns  # default sampling
        A = pb.assemble(3.33 + 0.05j)
        assert A.shape == (8 * n_pts, pb.n_columns)
        # constraints comfortably exceed unknowns
        assert A.shape[0] >= 2 * A.shape[1]

    def test_no_zero_columns(self):
        pb = make_dimer(4.0, ell_max=2)
        A = pb.assemble(3.33 + 0.05j)
        assert np.allclose(np.linalg.norm(A, axis=0), 1.0, atol=1e-12)

    def test_interior_columns_stay_on_their_sphere(self):
        pb = make_dimer(4.0, ell_max=2)
        A = pb.assemble(3.33 + 0.05j)
        n_pts = 2 * pb.n_columns
        rows_sphere1 = slice(4 * n_pts, 8 * n_pts)
        for col, (j_sphere, region, _, _) in enumerate(pb._columns()):
            if region == "int" and j_sphere == 0:
                assert np.all(A[rows_sphere1, col] == 0)

    def test_sigma_min_nonnegative(self):
        pb = make_dimer(4.0, ell_max=2)
        for w in (3.0 + 0.03j, 3.33 + 0.05j, 3.6 + 0.2j):
            assert pb.sigma_min_at(w) >= 0.0

    def test_sampling_refinement_saturated(self):
        # doubling the surface point count barely moves sigma_min
        w_test = 3.33 + 0.05j
        pb = make_dimer(4.0, ell_max=2)
        pb_fine = make_dimer(
            4.0, ell_max=2, points_per_sphere=4 * pb.n_columns
        )
        s1 = pb.sigma_min_at(w_test)
        s2 = pb_fine.sigma_min_at(w_test)
        assert abs(s2 - s1) <= 0.05 * s1


class TestSingleSphereConsistency:
    def test_dip_at_isolated_sphere_eigenfrequency(self, single_resonances):
        assert len(single_resonances) == 1
        r = single_resonances[0]
        assert abs(r.omega.real - W0_10.real) <= 1e-3 * abs(W0_10.real)
        assert abs(r.omega.imag - W0_10.imag) <= 0.05 * abs(W0_10.imag)
        # the one-sphere basis solves its own boundary problem exactly
        assert r.sigma_min < 1e-10
        assert not r.near_window_edge

    def test_convergence_flag(self):
        pb = OracleProblem(
            spheres=(SphereGeometry(radius=RADIUS, center=(0.0, 0.0, 0.0)),),
            material=SILVER,
            ell_max=3,
        )
        rs = find_resonances(pb, WINDOW, grid=(10, 8), check_convergence=True)
        assert len(rs) == 1
        assert rs[0].converged
        assert rs[0].omega_refined is not None
        assert abs(rs[0].omega_refined - rs[0].omega) < 1e-3


class TestDimerResonances:
    def test_two_branches_found(self, dimer4_resonances):
        assert len(dimer4_resonances) == 2

    def test_matches_coupled_mode_eigenvalues(self, dimer4_resonances):
        cmt = sorted(
            (W0_10 + KAPPA_10_D4, W0_10 - KAPPA_10_D4), key=lambda w: w.real
        )
        for r, w_cmt in zip(dimer4_resonances, cmt):
            assert abs(r.omega.real - w_cmt.real) <= 0.02 * abs(w_cmt.real)
            assert abs(r.omega.imag - w_cmt.imag) <= 0.15 * abs(w_cmt.imag)

    def test_rotation_invariance(self, dimer4_resonances):
        R = Rotation.from_euler("zyx", [0.7, 0.4, -0.3]).as_matrix()
        pb = make_dimer(4.0, ell_max=2, frame=tuple(map(tuple, R)))
        rot = find_resonances(pb, WINDOW, grid=(12, 8), check_convergence=False)
        assert len(rot) == len(dimer4_resonances)
        for a, b in zip(dimer4_resonances, rot):
            assert abs(a.omega - b.omega) < 1e-3

    def test_axial_symmetry_m0_suffices(self, dimer4_resonances):
        pb = make_dimer(4.0, ell_max=2, m_set=(-1, 0, 1))
        full = find_resonances(pb, WINDOW, grid=(12, 8), check_convergence=False)
        assert len(full) == len(dimer4_resonances)
        for a, b in zip(dimer4_resonances, full):
            assert abs(a.omega - b.omega) < 1e-3

    def test_decoupling_limit(self):
        pb = make_dimer(12.0, ell_max=2)
        rs = find_resonances(
            pb, (3.340 + 0.046j, 3.356 + 0.058j), grid=(28, 10),
            check_convergence=False,
        )
        assert len(rs) == 2
        for r in rs:
            assert abs(r.omega - W0_10) <= 5e-3 * abs(W0_10)


class TestFindResonancesInterface:
    def test_window_validation(self):
        pb = make_dimer(4.0, ell_max=2)
        with pytest.raises(ValueError, match="window"):
            find_resonances(pb, (3.45 + 0.10j, 3.25 + 0.02j))

    def test_empty_window_returns_nothing(self):
        # far below the resonance: sigma_min has no interior dip
        pb = make_dimer(4.0, ell_max=2)
        rs = find_resonances(
            pb, (1.0 + 0.3j, 1.2 + 0.5j), grid=(6, 5), check_convergence=False
        )
        assert rs == []
