"""Transverse-magnetic quasinormal modes of a single metallic sphere.

The characteristic equation, its root search with spurious-zero
rejection, exact closed-form normalization of the resulting leaky modes,
and evaluation of their electromagnetic fields anywhere in space.

Conventions
-----------
* exp(+i w t) time dependence: a decaying mode has Im w > 0 and full
  linewidth 2 Im w; the outgoing radial factor is h(2)_l(k r).
* Frequencies in eV, lengths in nm, k = (w / hbar c) sqrt(eps) in 1/nm.
* Mode fields are TM multipoles about the sphere's ``dipole_axis`` (the
  local z axis); the azimuthal order m refers to that frame.

Three radial scalings of the same mode appear in the literature this
package follows.  With psi-hat'(x) = d/dx [x f(x)] and C the boundary
prefactor 1/f_l(x(a)) of each region:

* "norm" scaling   E ~ zeta C [ l(l+1) f/(kr) Y rhat + psi-hat'/(kr) (...) ]
  is what the closed-form normalization functional integrates;
* physical fields  E = (k/eps) * (norm scaling), the set that is actually
  tangentially continuous across the surface, returned by ``eval_field``;
* the magnetic field H = i k0 zeta C f(kr) [ (dY/dp)/sin t that - dY/dt phat ]
  is scaling-independent (k0 = w / hbar c) and continuous by construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Literal, Sequence

import numpy as np

from .material import UNITS, Background, DrudeMaterial, UnitSystem
from .numerics import RootCandidate, scan_roots
from .special import AngularIndex, tesseral_theta_tables
from ._kernels import sph_jn_table, sph_yn_table

__all__ = [
    "SphereGeometry",
    "SphereMode",
    "FieldSample",
    "ModeScan",
    "characteristic_residual",
    "characteristic_quotient",
    "default_window",
    "scan_modes",
    "solve_modes",
    "normalize",
    "normalization_residual",
    "normalization_volume_surface",
    "eval_field",
    "nonradiative_width",
    "dispersion_sweep",
]

_RESIDUAL_TOL = 1e-8
_QUOTIENT_TOL = 1e-6


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("direction vector must be nonzero")
    return v / n


@dataclass(frozen=True)
class SphereGeometry:
    """A sphere: radius (nm), center (nm), and mode quantization axis."""

    radius: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    dipole_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        axis = _unit(self.dipole_axis)
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "dipole_axis", tuple(float(c) for c in axis))

    @property
    def frame(self) -> np.ndarray:
        """Orthonormal frame (columns e1, e2, n) with n = dipole_axis."""
        n = np.asarray(self.dipole_axis)
        ref = np.array([1.0, 0.0, 0.0])
        if abs(n @ ref) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        e1 = _unit(ref - (ref @ n) * n)
        e2 = np.cross(n, e1)
        return np.column_stack([e1, e2, n])


@dataclass(frozen=True)
class SphereMode:
    """One converged quasinormal mode of a sphere.

    ``residual`` / ``quotient_residual`` are the relative residuals of the
    cleared and quotient forms of the characteristic equation at ``omega``;
    ``zeta`` is the normalization amplitude (None until ``normalize``).
    """

    idx: AngularIndex
    geometry: SphereGeometry
    material: DrudeMaterial
    background: Background
    omega: complex
    residual: float
    quotient_residual: float
    zeta: complex | None = None

    def __post_init__(self):
        if self.omega.imag < 0:
            warnings.warn(
                f"mode at {self.omega} has Im w < 0 (temporally growing in the "
                "exp(+iwt) convention); flagged as unphysical",
                stacklevel=2,
            )

    @property
    def decaying(self) -> bool:
        return self.omega.imag >= 0

    @property
    def width(self) -> float:
        """Full linewidth 2 Im w (eV)."""
        return 2.0 * self.omega.imag

    @property
    def k_in(self) -> complex:
        return UNITS.wavenumber(self.omega, self.material.eps(self.omega))

    @property
    def k_out(self) -> complex:
        return UNITS.wavenumber(self.omega, self.background.eps(self.omega))

    @property
    def normalized(self) -> bool:
        return self.zeta is not None


@dataclass(frozen=True)
class FieldSample:
    """Electromagnetic field values at a batch of points (global Cartesian)."""

    points: np.ndarray  # (N, 3) float
    E: np.ndarray  # (N, 3) complex
    H: np.ndarray  # (N, 3) complex


@dataclass
class ModeScan:
    """Converged modes plus the candidates rejected by the acceptance rule."""

    modes: list[SphereMode]
    unconverged: list[RootCandidate]


# ---------------------------------------------------------------------------
# Characteristic equation
# ---------------------------------------------------------------------------


def _boundary_tables(ell: int, omega: complex, radius: float,
                     material: DrudeMaterial, background: Background):
    """(eps_in, eps_out, x_in, x_out, j, psi'_j, h, psi'_h) at the surface."""
    omega = complex(omega)
    eps_i = material.eps(omega)
    eps_o = background.eps(omega)
    x_in = UNITS.wavenumber(omega, eps_i) * radius
    x_out = UNITS.wavenumber(omega, eps_o) * radius
    j, jp = sph_jn_table(ell, np.array([x_in]))
    jl, jlp = j[ell, 0], jp[ell, 0]
    jh, jhp = sph_jn_table(ell, np.array([x_out]))
    yh, yhp = sph_yn_table(ell, np.array([x_out]))
    hl = jh[ell, 0] - 1j * yh[ell, 0]
    hlp = jhp[ell, 0] - 1j * yhp[ell, 0]
    psi_j = jl + x_in * jlp
    psi_h = hl + x_out * hlp
    return eps_i, eps_o, x_in, x_out, jl, psi_j, hl, psi_h


def characteristic_residual(
    ell: int,
    omega: complex,
    geometry: SphereGeometry,
    material: DrudeMaterial,
    background: Background,
) -> complex:
    """Cleared TM characteristic function G(w); G = 0 at a mode.

    G = eps_in j_l(x_in) [x_out h_l(x_out)]' - eps_out h_l(x_out) [x_in j_l(x_in)]'

    where [x f]' is the derivative of the Riccati function x f(x).  G is
    analytic (no quotient poles) but vanishes spuriously where
    eps_in(w) = 0 drives x_in -> 0; use ``characteristic_quotient`` to
    discriminate true modes.
    """
    if ell < 1:
        raise ValueError("TM multipoles require ell >= 1")
    eps_i, eps_o, _, _, jl, psi_j, hl, psi_h = _boundary_tables(
        ell, omega, geometry.radius, material, background
    )
    return eps_i * jl * psi_h - eps_o * hl * psi_j


def _characteristic_scale(
    ell, omega, geometry, material, background
) -> tuple[float, complex]:
    eps_i, eps_o, _, _, jl, psi_j, hl, psi_h = _boundary_tables(
        ell, omega, geometry.radius, material, background
    )
    g = eps_i * jl * psi_h - eps_o * hl * psi_j
    scale = abs(eps_i * jl * psi_h) + abs(eps_o * hl * psi_j)
    return scale, g


def characteristic_quotient(
    ell: int,
    omega: complex,
    geometry: SphereGeometry,
    material: DrudeMaterial,
    background: Background,
) -> complex:
    """Impedance-ratio form of the characteristic equation.

    Q = [x_in j]'(x_in) / (eps_in j) - [x_out h]'(x_out) / (eps_out h).

    Q shares the true modes with G but stays away from zero at G's
    spurious eps_in(w) = 0 zeros (it diverges there), so demanding small
    |Q| alongside small |G| rejects them.
    """
    if ell < 1:
        raise ValueError("TM multipoles require ell >= 1")
    eps_i, eps_o, _, _, jl, psi_j, hl, psi_h = _boundary_tables(
        ell, omega, geometry.radius, material, background
    )
    return psi_j / (eps_i * jl) - psi_h / (eps_o * hl)


def default_window(material: DrudeMaterial) -> tuple[complex, complex]:
    """Default complex-frequency search rectangle for a Drude material.

    Brackets the quasi-static dipole scale w_p/sqrt(3): real part in
    [0.3, 1.2] of it, imaginary part in [0, 0.3 w_p].
    """
    w_qs = material.omega_p / np.sqrt(3.0)
    return (0.3 * w_qs + 0.0j, 1.2 * w_qs + 0.3j * material.omega_p)


def scan_modes(
    ell: int,
    geometry: SphereGeometry,
    material: DrudeMaterial,
    background: Background = Background(),
    window: tuple[complex, complex] | None = None,
    grid: tuple[int, int] = (48, 24),
    m: int = 0,
) -> ModeScan:
    """Search a frequency window for TM modes of order ell.

    Every accepted mode satisfies both relative-residual gates: cleared
    form below 1e-8 and quotient form below 1e-6 (the latter rejects the
    spurious zeros of the cleared form at eps_in = 0).
    """
    if window is None:
        window = default_window(material)
    scale0, _ = _characteristic_scale(
        ell, 0.5 * (window[0] + window[1]), geometry, material, background
    )
    if scale0 == 0 or not np.isfinite(scale0):
        scale0 = 1.0

    def f(w: complex) -> complex:
        return characteristic_residual(ell, w, geometry, material, background) / scale0

    scan = scan_roots(f, window, grid=grid, tol=1e-12)
    modes: list[SphereMode] = []
    rejected = list(scan.rejected)
    for root in scan.roots:
        scale, g = _characteristic_scale(ell, root, geometry, material, background)
        rel = abs(g) / scale if scale > 0 else np.inf
        q = characteristic_quotient(ell, root, geometry, material, background)
        eps_i, eps_o, _, _, jl, psi_j, hl, psi_h = _boundary_tables(
            ell, root, geometry.radius, material, background
        )
        q_scale = abs(psi_j / (eps_i * jl)) + abs(psi_h / (eps_o * hl))
        q_rel = abs(q) / q_scale if q_scale > 0 else np.inf
        if rel < _RESIDUAL_TOL and q_rel < _QUOTIENT_TOL:
            modes.append(
                SphereMode(
                    idx=AngularIndex(ell, m),
                    geometry=geometry,
                    material=material,
                    background=background,
                    omega=root,
                    residual=rel,
                    quotient_residual=q_rel,
                )
            )
        else:
            rejected.append(RootCandidate(root, rel, False, 0))
    modes.sort(key=lambda md: (md.omega.real, md.omega.imag))
    return ModeScan(modes=modes, unconverged=rejected)


def solve_modes(
    ell: int,
    geometry: SphereGeometry,
    material: DrudeMaterial,
    background: Background = Background(),
    window: tuple[complex, complex] | None = None,
    grid: tuple[int, int] = (48, 24),
    m: int = 0,
) -> list[SphereMode]:
    """Converged TM modes of order ell inside the window (see scan_modes)."""
    return scan_modes(ell, geometry, material, background, window, grid, m).modes


def nonradiative_width(mode: SphereMode) -> float:
    """Ohmic (collision) part of the linewidth: gamma_s / 2 (eV).

    The remainder of the full width 2 Im w is radiative.
    """
    return 0.5 * mode.material.gamma_s


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def _i_functional(
    ell: int, kind: str, k: complex, sig: complex, C: complex, r: float
) -> complex:
    """Antiderivative of the norm-scaling radial integrand at radius r.

    I(r) = sig C^2 (c / k^2) [ r f^2 + k r^2 f f' + (k^2 r^3 / 2)(f^2 - f_{l-1} f_{l+1}) ]

    with c = l(l+1), f = f_l(kr).  d/dr I(r) equals sig C^2 c / k^2 times
    (c f^2 + psi-hat'^2) evaluated at kr, i.e. the full solid-angle
    integral of sig E.E r^2 for the norm-scaling fields.
    """
    z = np.array([k * r])
    if kind == "j":
        tab, tabp = sph_jn_table(ell + 1, z)
    else:
        j, jp = sph_jn_table(ell + 1, z)
        y, yp = sph_yn_table(ell + 1, z)
        tab, tabp = j - 1j * y, jp - 1j * yp
    f, fp = tab[ell, 0], tabp[ell, 0]
    fm, fp1 = tab[ell - 1, 0], tab[ell + 1, 0]
    c = ell * (ell + 1)
    bracket = r * f * f + k * r * r * f * fp + 0.5 * k * k * r**3 * (f * f - fm * fp1)
    return sig * C * C * c / (k * k) * bracket


def _mode_constants(mode: SphereMode):
    """(k_in, k_out, eps_in, eps_out, sig_in, sig_out, C_in, C_out)."""
    w = mode.omega
    a = mode.geometry.radius
    eps_i = mode.material.eps(w)
    eps_o = mode.background.eps(w)
    k_i = UNITS.wavenumber(w, eps_i)
    k_o = UNITS.wavenumber(w, eps_o)
    sig_i = mode.material.sigma(w)
    sig_o = mode.background.sigma(w)
    j, _ = sph_jn_table(mode.idx.ell, np.array([k_i * a]))
    jh, _ = sph_jn_table(mode.idx.ell, np.array([k_o * a]))
    yh, _ = sph_yn_table(mode.idx.ell, np.array([k_o * a]))
    C_in = 1.0 / j[mode.idx.ell, 0]
    C_out = 1.0 / (jh[mode.idx.ell, 0] - 1j * yh[mode.idx.ell, 0])
    return k_i, k_o, eps_i, eps_o, sig_i, sig_o, C_in, C_out


def normalize(mode: SphereMode) -> SphereMode:
    """Return the mode with its normalization amplitude zeta set.

    zeta is fixed by the exact reduced condition I[j](a) - I[h](a) = 1,
    where I is the closed-form antiderivative of the norm-scaling volume
    integrand (interior modified dielectric inside, background outside).
    The principal root with Re zeta >= 0 (ties broken to Im zeta >= 0)
    is chosen.
    """
    ell = mode.idx.ell
    a = mode.geometry.radius
    k_i, k_o, _, _, sig_i, sig_o, C_in, C_out = _mode_constants(mode)
    denom = _i_functional(ell, "j", k_i, sig_i, C_in, a) - _i_functional(
        ell, "h", k_o, sig_o, C_out, a
    )
    if denom == 0 or not np.isfinite(abs(denom)):
        raise ArithmeticError(f"degenerate normalization integral {denom}")
    zeta = np.sqrt(1.0 / denom)
    if zeta.real < 0 or (zeta.real == 0 and zeta.imag < 0):
        zeta = -zeta
    return replace(mode, zeta=complex(zeta))


def normalization_residual(mode: SphereMode) -> float:
    """|I[j](a) - I[h](a) - 1| for a normalized mode (zeta^2-scaled)."""
    if not mode.normalized:
        raise ValueError("mode is not normalized; call normalize() first")
    ell = mode.idx.ell
    a = mode.geometry.radius
    k_i, k_o, _, _, sig_i, sig_o, C_in, C_out = _mode_constants(mode)
    z2 = mode.zeta**2
    val = z2 * (
        _i_functional(ell, "j", k_i, sig_i, C_in, a)
        - _i_functional(ell, "h", k_o, sig_o, C_out, a)
    )
    return abs(val - 1.0)


def _radial_integrand(mode: SphereMode, r: np.ndarray) -> np.ndarray:
    """sig zeta^2 C^2 c (c f^2 + psi-hat'^2) / k^2 at radii r (norm scaling).

    This is the solid-angle integral of sig E.E r^2 for norm-scaling
    fields, i.e. the radial density whose antiderivative is _i_functional.
    """
    ell = mode.idx.ell
    a = mode.geometry.radius
    k_i, k_o, _, _, sig_i, sig_o, C_in, C_out = _mode_constants(mode)
    c = ell * (ell + 1)
    out = np.empty(r.shape, dtype=complex)
    for inside in (True, False):
        mask = r <= a if inside else r > a
        if not mask.any():
            continue
        k = k_i if inside else k_o
        sig = sig_i if inside else sig_o
        C = C_in if inside else C_out
        z = k * r[mask]
        if inside:
            tab, tabp = sph_jn_table(ell, z)
        else:
            j, jp = sph_jn_table(ell, z)
            y, yp = sph_yn_table(ell, z)
            tab, tabp = j - 1j * y, jp - 1j * yp
        f, fp = tab[ell], tabp[ell]
        psi_p = f + z * fp
        out[mask] = sig * C * C * c * (c * f * f + psi_p * psi_p) / (k * k)
    return mode.zeta**2 * out


def normalization_volume_surface(
    mode: SphereMode, R: float, surface: Literal["asymptotic", "exact"] = "exact"
) -> complex:
    """Numerical volume integral to radius R plus the R surface term.

    The volume part integrates the norm-scaling integrand radially with
    composite Gauss-Legendre quadrature (closed forms are NOT used, so
    this independently validates them).  The surface term subtracts the
    outgoing-tail contribution at R:

    * ``"exact"`` (default): minus the exact exterior antiderivative at
      R — the result is then R-independent to quadrature accuracy;
    * ``"asymptotic"``: the two-term large-kR form of that tail, built
      from e^{-2 i k_out R}.  Leading-order only: because the mode
      frequency is complex the neglected orders carry the growing factor
      e^{2 Im(k_out) R} and the result keeps a slow R drift (an exactly
      R-independent local surface density in f^2, psi-hat'^2 alone does
      not exist).

    For a correctly normalized mode the result equals 1.
    """
    if not mode.normalized:
        raise ValueError("mode is not normalized; call normalize() first")
    ell = mode.idx.ell
    a = mode.geometry.radius
    if R <= a:
        raise ValueError("R must exceed the sphere radius")
    k_i, k_o, _, _, sig_i, sig_o, C_in, C_out = _mode_constants(mode)

    nodes, weights = np.polynomial.legendre.leggauss(24)

    def seg(lo, hi, n_panels):
        total = 0.0 + 0.0j
        edges = np.linspace(lo, hi, n_panels + 1)
        for s, e in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (s + e), 0.5 * (e - s)
            r = mid + half * nodes
            total += half * np.sum(weights * _radial_integrand(mode, r))
        return total

    pan_in = 8 + int(abs(k_i) * a)
    pan_out = 8 + 2 * int(abs(k_o) * (R - a) / np.pi)
    vol = seg(1e-9 * a, a, pan_in) + seg(a, R, pan_out)

    c = ell * (ell + 1)
    z2 = mode.zeta**2
    if surface == "exact":
        surf = -z2 * _i_functional(ell, "h", k_o, sig_o, C_out, R)
    else:
        x = k_o * R
        u = (-1.0) ** (ell + 1) * np.exp(-2j * x)
        # two-term tail of the exterior antiderivative: (-i/2k + 1/(k^2 R)) u
        surf = -z2 * sig_o * C_out**2 * c / k_o**2 * u * (-1j / (2 * k_o) + 1.0 / (k_o**2 * R))
    return complex(vol + surf)


# ---------------------------------------------------------------------------
# Field evaluation
# ---------------------------------------------------------------------------


def tm_field(
    ell: int,
    m: int,
    omega: complex,
    k: complex,
    eps: complex,
    kind: str,
    center,
    frame: np.ndarray,
    points: np.ndarray,
    prefactor: complex = 1.0,
    scaling: Literal["physical", "norm"] = "physical",
    units: UnitSystem = UNITS,
):
    """TM multipole (E, H) of one region's radial family at given points.

    ``kind`` selects the radial family: "j" (regular) or "h2" (outgoing).
    ``frame`` columns (e1, e2, n) define the local axes; m is the
    azimuthal order about n.  ``scaling`` chooses the electric-field
    radial prefactor: "physical" (1/(eps r), tangentially continuous set)
    or "norm" (1/(k r), the normalization/coupling convention).  H is the
    same for both.  Returns (E, H) as (N, 3) complex global-Cartesian
    arrays; ``prefactor`` multiplies both.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"points must be (N, 3), got {pts.shape}")
    loc = (pts - np.asarray(center, dtype=float)) @ np.asarray(frame)
    r = np.linalg.norm(loc, axis=1)
    if (r == 0).any():
        raise ValueError("field evaluation at a sphere center is singular")
    ct = np.clip(loc[:, 2] / r, -1.0, 1.0)
    st = np.sqrt(np.maximum(0.0, 1.0 - ct * ct))
    phi = np.arctan2(loc[:, 1], loc[:, 0])

    z = k * r
    if kind == "j":
        tab, tabp = sph_jn_table(ell, z)
    elif kind == "h2":
        j, jp = sph_jn_table(ell, z)
        y, yp = sph_yn_table(ell, z)
        tab, tabp = j - 1j * y, jp - 1j * yp
    else:
        raise ValueError(f"unknown radial kind {kind!r}")
    f, fp = tab[ell], tabp[ell]
    psi_p = f + z * fp

    T, dT, Ts = tesseral_theta_tables(ell, m, ct, st)
    ma = abs(m)
    if m > 0:
        az, daz = np.cos(ma * phi), -ma * np.sin(ma * phi)
    elif m == 0:
        az, daz = np.ones_like(phi), np.zeros_like(phi)
    else:
        az, daz = np.sin(ma * phi), ma * np.cos(ma * phi)
    Y = T[ell] * az
    dY = dT[ell] * az
    # (dY/dphi)/sin(theta), pole-safe through the Ts kernel
    YpS = Ts[ell] * daz

    c = ell * (ell + 1)
    radial_pref = 1.0 / (eps * r) if scaling == "physical" else 1.0 / (k * r)
    E_r = prefactor * radial_pref * c * f * Y
    E_t = prefactor * radial_pref * psi_p * dY
    E_p = prefactor * radial_pref * psi_p * YpS

    k0 = omega / units.hbar_c_ev_nm
    H_t = prefactor * 1j * k0 * f * YpS
    H_p = -prefactor * 1j * k0 * f * dY

    cp, sp = np.cos(phi), np.sin(phi)
    rhat = np.stack([st * cp, st * sp, ct], axis=1)
    that = np.stack([ct * cp, ct * sp, -st], axis=1)
    phat = np.stack([-sp, cp, np.zeros_like(sp)], axis=1)

    E_loc = E_r[:, None] * rhat + E_t[:, None] * that + E_p[:, None] * phat
    H_loc = H_t[:, None] * that + H_p[:, None] * phat
    frame = np.asarray(frame)
    return E_loc @ frame.T, H_loc @ frame.T


def eval_field(mode: SphereMode, points) -> FieldSample:
    """Physical mode fields at global Cartesian points (normalized mode).

    Interior points use the regular (j) radial family with the interior
    permittivity, exterior points the outgoing (h2) family; the shared
    boundary prefactors make tangential E and H continuous across the
    surface.  Amplitudes are those of the norm-scaling normalization
    condition I[j] - I[h] = 1.
    """
    if not mode.normalized:
        raise ValueError("mode is not normalized; call normalize() first")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k_i, k_o, eps_i, eps_o, _, _, C_in, C_out = _mode_constants(mode)
    loc = pts - np.asarray(mode.geometry.center)
    r = np.linalg.norm(loc, axis=1)
    inside = r <= mode.geometry.radius

    E = np.empty((len(pts), 3), dtype=complex)
    H = np.empty((len(pts), 3), dtype=complex)
    for mask, kind, k, eps, C in (
        (inside, "j", k_i, eps_i, C_in),
        (~inside, "h2", k_o, eps_o, C_out),
    ):
        if not mask.any():
            continue
        Em, Hm = tm_field(
            mode.idx.ell,
            mode.idx.m,
            mode.omega,
            k,
            eps,
            kind,
            mode.geometry.center,
            mode.geometry.frame,
            pts[mask],
            prefactor=mode.zeta * C,
            scaling="physical",
        )
        E[mask] = Em
        H[mask] = Hm
    return FieldSample(points=pts, E=E, H=H)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def dispersion_sweep(
    radii: Sequence[float],
    ells: Sequence[int],
    material: DrudeMaterial,
    background: Background = Background(),
    window: tuple[complex, complex] | None = None,
    grid: tuple[int, int] = (48, 24),
):
    """Mode table over radii and multipole orders.

    Returns (rows, n_unconverged): rows are dicts with keys
    radius_nm / ell / omega (complex) / residual, sorted by (radius, ell,
    Re omega); unconverged counts rejected candidates across the sweep.
    """
    from .numerics import parallel_map

    tasks = [(a, ell) for a in radii for ell in ells]

    def solve_one(task):
        a, ell = task
        scan = scan_modes(ell, SphereGeometry(radius=a), material, background, window, grid)
        return [(a, ell, md) for md in scan.modes], len(scan.unconverged)

    rows = []
    n_bad = 0
    for found, bad in parallel_map(solve_one, tasks):
        n_bad += bad
        for a, ell, md in found:
            rows.append(
                {
                    "radius_nm": a,
                    "ell": ell,
                    "omega": md.omega,
                    "residual": md.residual,
                }
            )
    rows.sort(key=lambda row: (row["radius_nm"], row["ell"], row["omega"].real))
    return rows, n_bad
