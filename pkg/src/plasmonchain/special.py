"""Complex-argument spherical Bessel/Hankel functions and tesseral harmonics.

All spherical Bessel family functions accept complex arguments anywhere in
the plane (the resonance searches live in the lower half of the squared-
frequency mapping, so arguments routinely have negative imaginary part,
where j and y both grow exponentially and their difference in h(2) is
delicate).  The heavy lifting is done by the batched table kernels in
``plasmonchain._kernels``; this module provides the user-facing scalar /
array wrappers, the real tesseral (real-valued spherical) harmonics, and
the closed-form radial-integral identity check used by the normalization
machinery.

Tesseral convention (no Condon-Shortley phase), orthonormal on the sphere:

* m > 0:  Y = sqrt((2l+1)/(2 pi) * (l-m)!/(l+m)!) * P_l^m(cos t) * cos(m p)
* m = 0:  Y = sqrt((2l+1)/(4 pi)) * P_l(cos t)
* m < 0:  Y = sqrt((2l+1)/(2 pi) * (l-|m|)!/(l+|m|)!) * P_l^|m|(cos t) * sin(|m| p)
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._kernels import legendre_pmt_table, sph_jn_table, sph_yn_table

__all__ = [
    "AngularIndex",
    "sph_bessel_j",
    "sph_bessel_y",
    "sph_hankel2",
    "tesseral_Y",
    "tesseral_theta_tables",
    "bessel_radial_identity_check",
]


@dataclass(frozen=True)
class AngularIndex:
    """Angular-momentum index pair (l, m) of a multipole.

    l >= 1 for physical transverse-magnetic multipoles; |m| <= l.
    """

    ell: int
    m: int = 0

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError(f"ell must be >= 0, got {self.ell}")
        if abs(self.m) > self.ell:
            raise ValueError(f"|m| <= ell required, got (ell={self.ell}, m={self.m})")


def _as_batch(x):
    arr = np.asarray(x, dtype=np.complex128)
    return arr.ravel(), arr.shape, arr.ndim == 0


def _pick(table, row, shape, scalar):
    out = table[row].reshape(shape)
    return complex(out) if scalar else out


def sph_bessel_j(ell: int, x, derivative: bool = False):
    """Spherical Bessel function j_l(x), or its derivative, complex x."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    flat, shape, scalar = _as_batch(x)
    j, jp = sph_jn_table(ell, flat)
    return _pick(jp if derivative else j, ell, shape, scalar)


def sph_bessel_y(ell: int, x, derivative: bool = False):
    """Spherical Bessel function y_l(x), or its derivative, complex x != 0."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    flat, shape, scalar = _as_batch(x)
    y, yp = sph_yn_table(ell, flat)
    return _pick(yp if derivative else y, ell, shape, scalar)


def sph_hankel2(ell: int, x, derivative: bool = False):
    """Spherical Hankel function of the second kind, h(2)_l = j_l - i y_l.

    With the exp(+i w t) time convention used throughout this package,
    h(2)_l(kr) ~ i^(l+1) exp(-i k r)/(k r) is the outgoing radial factor.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    flat, shape, scalar = _as_batch(x)
    j, jp = sph_jn_table(ell, flat)
    y, yp = sph_yn_table(ell, flat)
    table = (jp - 1j * yp) if derivative else (j - 1j * y)
    return _pick(table, ell, shape, scalar)


def _norm_lm(ell: int, m: int) -> float:
    m = abs(m)
    if m == 0:
        return math.sqrt((2 * ell + 1) / (4.0 * math.pi))
    return math.sqrt(
        (2 * ell + 1) / (2.0 * math.pi) * math.factorial(ell - m) / math.factorial(ell + m)
    )


def tesseral_Y(idx: AngularIndex, theta, phi, derivatives: bool = False):
    """Real tesseral harmonic Y_lm(theta, phi), orthonormal on the sphere.

    With ``derivatives=True`` returns ``(Y, dY/dtheta, dY/dphi)``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    theta_b, phi_b = np.broadcast_arrays(theta, phi)
    shape = theta_b.shape
    scalar = theta_b.ndim == 0
    th = theta_b.ravel()
    ph = phi_b.ravel()

    ma = abs(idx.m)
    P, _, tau = legendre_pmt_table(idx.ell, ma, np.cos(th), np.sin(th))
    nrm = _norm_lm(idx.ell, idx.m)
    if idx.m > 0:
        az, daz = np.cos(ma * ph), -ma * np.sin(ma * ph)
    elif idx.m == 0:
        az, daz = np.ones_like(ph), np.zeros_like(ph)
    else:
        az, daz = np.sin(ma * ph), ma * np.cos(ma * ph)

    Y = nrm * P[idx.ell] * az
    if not derivatives:
        return float(Y[0]) if scalar else Y.reshape(shape)
    dY_dt = nrm * tau[idx.ell] * az
    dY_dp = nrm * P[idx.ell] * daz
    if scalar:
        return float(Y[0]), float(dY_dt[0]), float(dY_dp[0])
    return Y.reshape(shape), dY_dt.reshape(shape), dY_dp.reshape(shape)


def tesseral_theta_tables(lmax: int, m: int, cos_theta, sin_theta):
    """Normalized theta-dependent tesseral kernels for all l = 0..lmax.

    Returns ``(T, dT, T_over_sin)`` of shape ``(lmax + 1, n)``: the theta
    part of Y_lm (the azimuthal factor excluded), its theta derivative,
    and the pole-safe ratio (theta part)/sin(theta).  These are the three
    angular ingredients of the transverse-magnetic vector fields.  For
    m = 0 the third table is zero (its use is always multiplied by m).
    """
    ma = abs(m)
    ct = np.asarray(cos_theta, dtype=np.float64).ravel()
    st = np.asarray(sin_theta, dtype=np.float64).ravel()
    P, pi, tau = legendre_pmt_table(lmax, ma, ct, st)
    norms = np.array([_norm_lm(ell, ma) if ell >= ma else 0.0 for ell in range(lmax + 1)])
    scale = norms[:, None]
    return scale * P, scale * tau, scale * pi


def _gauss_panels(f, lo: float, hi: float, n_panels: int, order: int = 16):
    """Composite Gauss-Legendre quadrature of f over [lo, hi]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        r = mid + half * nodes
        total += half * np.sum(weights * f(r))
    return total


def _radial_family(kind: str, ell: int, z: np.ndarray):
    if kind == "j":
        tab, tabp = sph_jn_table(ell + 1, z)
    elif kind == "y":
        tab, tabp = sph_yn_table(ell + 1, z)
    elif kind == "h2":
        j, jp = sph_jn_table(ell + 1, z)
        y, yp = sph_yn_table(ell + 1, z)
        tab, tabp = j - 1j * y, jp - 1j * yp
    else:
        raise ValueError(f"unknown radial family {kind!r}")
    return tab, tabp


def bessel_radial_identity_check(
    ell: int, k: complex, r_lo: float, r_hi: float, kind: str = "j"
) -> float:
    """Residual of the closed-form radial integrals used by normalization.

    Checks, by high-order quadrature against the antiderivative forms,

    * integral of r^2 f_l(kr)^2  ==  [r^3/2 (f_l^2 - f_{l-1} f_{l+1})],
    * integral of (l(l+1) f_l(kr)^2 + (d/dx[x f_l(x)])^2 at x=kr)
      ==  [r f_l^2 + k r^2 f_l f_l' + k^2 r^3/2 (f_l^2 - f_{l-1} f_{l+1})],

    both evaluated between r_lo and r_hi for the chosen radial family
    (``"j"``, ``"y"`` or ``"h2"``).  Returns the larger of the two
    residuals, normalized to the antiderivative's endpoint magnitude; a
    ``UserWarning`` flags ill-conditioned intervals where the endpoint
    difference nearly cancels (e.g. spanning a zero of f).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if not (0 < r_lo < r_hi):
        raise ValueError("need 0 < r_lo < r_hi")
    k = complex(k)
    c = ell * (ell + 1)

    def tables(r):
        tab, tabp = _radial_family(kind, ell, np.atleast_1d(np.asarray(r, dtype=complex)) * k)
        return tab, tabp

    def f_sq_weighted(r):
        tab, _ = tables(r)
        return np.asarray(r) ** 2 * tab[ell] ** 2

    def combined(r):
        tab, tabp = tables(r)
        x = k * np.asarray(r)
        psi_hat_p = tab[ell] + x * tabp[ell]
        return c * tab[ell] ** 2 + psi_hat_p**2

    def moment_anti(r):
        tab, _ = tables(r)
        val = 0.5 * r**3 * (tab[ell] ** 2 - tab[ell - 1] * tab[ell + 1])
        return val.reshape(np.shape(r)) if np.ndim(r) else complex(val[0])

    def combined_anti(r):
        tab, tabp = tables(r)
        f, fp = tab[ell], tabp[ell]
        val = r * f**2 + k * r**2 * f * fp + k**2 * moment_anti(r)
        return val.reshape(np.shape(r)) if np.ndim(r) else complex(val[0])

    span = r_hi - r_lo
    n_panels = 4 + int(abs(k) * span / math.pi) * 2 + int(abs(k.imag) * r_hi)
    results = []
    for integrand, anti in ((f_sq_weighted, moment_anti), (combined, combined_anti)):
        lhs = _gauss_panels(integrand, r_lo, r_hi, n_panels)
        hi_val = complex(anti(r_hi))
        lo_val = complex(anti(r_lo))
        rhs = hi_val - lo_val
        endpoint_scale = max(abs(hi_val), abs(lo_val), 1e-300)
        if abs(rhs) < 1e-3 * endpoint_scale:
            warnings.warn(
                "radial identity endpoint difference nearly cancels "
                f"(|rhs|/scale = {abs(rhs) / endpoint_scale:.2e}); "
                "residual is ill-conditioned on this interval",
                stacklevel=2,
            )
        results.append(abs(lhs - rhs) / endpoint_scale)
    return max(results)
