"""Pure-numpy reference implementation of the special-function table kernels.

These are the hot inner kernels of the package: batched tables of complex
spherical Bessel functions and of associated-Legendre angular factors, for
all orders ``0..lmax`` at once.  A Cython twin (``_core``) implements the
same three entry points; the package selects one backend at import time
(see ``plasmonchain._kernels``).

Conventions
-----------
* ``sph_jn_table`` / ``sph_yn_table`` return arrays of shape
  ``(lmax + 1, n)``: row ``l`` holds the order-``l`` function at every
  point of the input batch ``z``.
* Derivatives are with respect to the (complex) argument.
* ``legendre_pmt_table`` returns unnormalized associated Legendre values
  without the Condon-Shortley phase, together with the two pole-safe
  angular kernels needed for vector spherical fields:
  ``pi = P_l^m(cos t)/sin t`` and ``tau = d P_l^m(cos t)/dt``.
"""

from __future__ import annotations

import numpy as np

# |z| at or below which the ascending power series is used for j_l.
_SERIES_RADIUS = 2.0
_SERIES_TERMS = 34
# Magnitude at which the downward (Miller) recurrence is rescaled.
_RESCALE_LIMIT = 1e250
_RESCALE_FACTOR = 1e-250


def _double_factorial(n: int) -> float:
    out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


def _series_jn(lmax: int, z: np.ndarray) -> np.ndarray:
    """Ascending series for j_l(z), accurate for |z| <~ 2."""
    j = np.empty((lmax + 1, z.shape[0]), dtype=np.complex128)
    z2 = -0.5 * z * z
    for ell in range(lmax + 1):
        term = z**ell / _double_factorial(2 * ell + 1)
        total = term.copy()
        for k in range(1, _SERIES_TERMS):
            term = term * z2 / (k * (2 * (ell + k) + 1))
            total += term
        j[ell] = total
    return j


def _miller_jn(lmax: int, z: np.ndarray) -> np.ndarray:
    """Downward (Miller) recurrence for j_l(z), |z| above the series radius.

    Runs the three-term recurrence down from a start order high enough
    that an arbitrary seed relaxes onto the recessive solution j_l, then
    normalizes against sin(z)/z (or the l=1 closed form near its zeros).
    """
    n = z.shape[0]
    azmax = float(np.abs(z).max())
    nstart = lmax + int(1.04 * azmax + 12.0 * azmax ** (1.0 / 3.0)) + 25

    j = np.zeros((lmax + 1, n), dtype=np.complex128)
    f_up = np.zeros(n, dtype=np.complex128)  # f_{nn+1}
    f_cur = np.ones(n, dtype=np.complex128)  # f_{nn}
    for nn in range(nstart, 0, -1):
        f_down = (2 * nn + 1) / z * f_cur - f_up
        f_up = f_cur
        f_cur = f_down
        if nn - 1 <= lmax:
            j[nn - 1] = f_cur
        big = np.abs(f_cur) > _RESCALE_LIMIT
        if big.any():
            f_cur[big] *= _RESCALE_FACTOR
            f_up[big] *= _RESCALE_FACTOR
            j[:, big] *= _RESCALE_FACTOR

    # Normalize against whichever closed form is better conditioned.
    j0_true = np.sin(z) / z
    j1_true = np.sin(z) / z**2 - np.cos(z) / z
    f0 = f_cur
    f1 = f_up
    use0 = np.abs(j0_true) >= np.abs(j1_true)
    ratio = np.where(use0, j0_true / np.where(use0, f0, 1.0),
                     j1_true / np.where(use0, 1.0, f1))
    return j * ratio


def sph_jn_table(lmax: int, z: np.ndarray):
    """Spherical Bessel j_l(z) and j_l'(z) for l = 0..lmax.

    Parameters
    ----------
    lmax : highest order.
    z : 1-D complex array of arguments (z = 0 allowed).

    Returns
    -------
    (j, jp) : complex arrays of shape (lmax + 1, len(z)).
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    n = z.shape[0]
    lhi = lmax + 1  # one extra order so jp[lmax] has j[lmax+1]... j[lmax-1]
    j = np.empty((lhi + 1, n), dtype=np.complex128)

    az = np.abs(z)
    small = az <= _SERIES_RADIUS
    if small.any():
        j[:, small] = _series_jn(lhi, z[small])
    if (~small).any():
        j[:, ~small] = _miller_jn(lhi, z[~small])

    jp = np.empty_like(j)
    with np.errstate(divide="ignore", invalid="ignore"):
        jp[0] = -j[1]
        for ell in range(1, lhi + 1):
            jp[ell] = j[ell - 1] - (ell + 1) / z * j[ell]
    zero = z == 0
    if zero.any():
        jp[:, zero] = 0.0
        if lhi >= 1:
            jp[1, zero] = 1.0 / 3.0
    return np.ascontiguousarray(j[: lmax + 1]), np.ascontiguousarray(jp[: lmax + 1])


def sph_yn_table(lmax: int, z: np.ndarray):
    """Spherical Bessel y_l(z) and y_l'(z) for l = 0..lmax (z != 0).

    Upward recurrence; y_l is the dominant solution in that direction for
    every argument, so the recurrence is stable at all orders used here.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if (z == 0).any():
        raise ValueError("y_l(z) is singular at z = 0")
    n = z.shape[0]
    lhi = lmax + 1
    y = np.empty((lhi + 1, n), dtype=np.complex128)
    y[0] = -np.cos(z) / z
    y[1] = (y[0] - np.sin(z)) / z
    for ell in range(1, lhi):
        y[ell + 1] = (2 * ell + 1) / z * y[ell] - y[ell - 1]
    yp = np.empty_like(y)
    yp[0] = -y[1]
    for ell in range(1, lhi + 1):
        yp[ell] = y[ell - 1] - (ell + 1) / z * y[ell]
    return np.ascontiguousarray(y[: lmax + 1]), np.ascontiguousarray(yp[: lmax + 1])


def legendre_pmt_table(lmax: int, m: int, ct: np.ndarray, st: np.ndarray):
    """Associated-Legendre angular kernels for one azimuthal order m >= 0.

    Returns ``(P, pi, tau)`` of shape ``(lmax + 1, n)`` where row ``l``
    holds, at each point (ct = cos t, st = sin t >= 0):

    * ``P``   -- P_l^m(ct), unnormalized, no Condon-Shortley phase;
    * ``pi``  -- P_l^m(ct)/st, computed pole-safe (zero rows for m = 0,
      where the field components it feeds carry an explicit factor m);
    * ``tau`` -- d/dt P_l^m(ct).

    Rows with l < m are zero.
    """
    ct = np.ascontiguousarray(ct, dtype=np.float64)
    st = np.ascontiguousarray(st, dtype=np.float64)
    n = ct.shape[0]
    P = np.zeros((lmax + 1, n))
    pi = np.zeros((lmax + 1, n))
    tau = np.zeros((lmax + 1, n))
    if m > lmax:
        return P, pi, tau

    if m == 0:
        P[0] = 1.0
        if lmax >= 1:
            P[1] = ct
        for ell in range(1, lmax):
            P[ell + 1] = ((2 * ell + 1) * ct * P[ell] - ell * P[ell - 1]) / (ell + 1)
        # dP_l/dt = -P_l^1: build the m = 1 row internally.
        if lmax >= 1:
            p1_prev = np.zeros(n)
            p1 = st.copy()  # P_1^1
            tau[1] = -p1
            for ell in range(1, lmax):
                p1_next = ((2 * ell + 1) * ct * p1 - (ell + 1) * p1_prev) / ell
                p1_prev, p1 = p1, p1_next
                tau[ell + 1] = -p1
        return P, pi, tau

    dfac = _double_factorial(2 * m - 1)
    pi[m] = dfac * st ** (m - 1)
    P[m] = pi[m] * st
    if lmax > m:
        pi[m + 1] = (2 * m + 1) * ct * pi[m]
        P[m + 1] = pi[m + 1] * st
    for ell in range(m + 1, lmax):
        P[ell + 1] = ((2 * ell + 1) * ct * P[ell] - (ell + m) * P[ell - 1]) / (ell - m + 1)
        pi[ell + 1] = ((2 * ell + 1) * ct * pi[ell] - (ell + m) * pi[ell - 1]) / (ell - m + 1)
    # sin t * dP/dt = l ct P_l - (l+m) P_{l-1}, divided through by sin t.
    tau[m] = m * ct * pi[m]
    for ell in range(m + 1, lmax + 1):
        tau[ell] = ell * ct * pi[ell] - (ell + m) * pi[ell - 1]
    return P, pi, tau
