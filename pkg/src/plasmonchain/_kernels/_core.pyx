# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: initializedcheck=False, language_level=3
"""Compiled twin of the pure-numpy table kernels (see ``_ref.py``).

Same three entry points, same conventions, same algorithm per point:
ascending power series for j_l at small argument, downward (Miller)
recurrence with rescaling above the series radius, upward recurrence for
y_l, and the stable associated-Legendre recurrences for the angular
kernels.  The batch loops run as plain C over typed memoryviews; the
reference backend remains the executable documentation.
"""

import numpy as np

from libc.math cimport cos, cosh, fabs, hypot, pow, sin, sinh

cdef double _SERIES_RADIUS = 2.0
cdef int _SERIES_TERMS = 34
cdef double _RESCALE_LIMIT = 1e250
cdef double _RESCALE_FACTOR = 1e-250


cdef inline double _cabs(double complex z) noexcept:
    return hypot(z.real, z.imag)


cdef inline void _sincos(double complex z, double complex *sin_z,
                         double complex *cos_z) noexcept:
    """sin(z) and cos(z) from one set of real trig evaluations."""
    cdef double sr = sin(z.real)
    cdef double cr = cos(z.real)
    cdef double sh = sinh(z.imag)
    cdef double ch = cosh(z.imag)
    sin_z[0].real = sr * ch
    sin_z[0].imag = cr * sh
    cos_z[0].real = cr * ch
    cos_z[0].imag = -sr * sh


cdef inline double _double_factorial(int n) noexcept:
    cdef double out = 1.0
    while n > 1:
        out *= n
        n -= 2
    return out


cdef void _jn_point(int lhi, double complex zi,
                    double complex[:, ::1] j, Py_ssize_t col) noexcept:
    """Fill column ``col`` of ``j`` with j_0..j_lhi at the point ``zi``."""
    cdef int ell, k, nn, nstart
    cdef double az = _cabs(zi)
    cdef double complex z2, term, total, f_up, f_cur, f_down, ratio
    cdef double complex j0_true, j1_true, inv_z, sin_z, cos_z

    if az <= _SERIES_RADIUS:
        z2 = -0.5 * zi * zi
        for ell in range(lhi + 1):
            term = 1.0 + 0j
            for k in range(ell):
                term = term * zi
            term = term / _double_factorial(2 * ell + 1)
            total = term
            for k in range(1, _SERIES_TERMS):
                term = term * z2 / <double>(k * (2 * (ell + k) + 1))
                total = total + term
            j[ell, col] = total
        return

    nstart = lhi + <int>(1.04 * az + 12.0 * pow(az, 1.0 / 3.0)) + 25
    for ell in range(lhi + 1):
        j[ell, col] = 0.0
    inv_z = 1.0 / zi  # one true complex division per point
    f_up = 0.0
    f_cur = 1.0 + 0j
    for nn in range(nstart, 0, -1):
        f_down = <double>(2 * nn + 1) * inv_z * f_cur - f_up
        f_up = f_cur
        f_cur = f_down
        if nn - 1 <= lhi:
            j[nn - 1, col] = f_cur
        # cheap magnitude bound; rescale timing does not affect the result
        if fabs(f_cur.real) + fabs(f_cur.imag) > _RESCALE_LIMIT:
            f_cur = f_cur * _RESCALE_FACTOR
            f_up = f_up * _RESCALE_FACTOR
            for ell in range(lhi + 1):
                j[ell, col] = j[ell, col] * _RESCALE_FACTOR

    _sincos(zi, &sin_z, &cos_z)
    j0_true = sin_z * inv_z
    j1_true = sin_z * inv_z * inv_z - cos_z * inv_z
    if _cabs(j0_true) >= _cabs(j1_true):
        ratio = j0_true / f_cur
    else:
        ratio = j1_true / f_up
    for ell in range(lhi + 1):
        j[ell, col] = j[ell, col] * ratio


def sph_jn_table(int lmax, z):
    """Spherical Bessel j_l(z) and j_l'(z) for l = 0..lmax.

    Parameters
    ----------
    lmax : highest order.
    z : 1-D complex array of arguments (z = 0 allowed).

    Returns
    -------
    (j, jp) : complex arrays of shape (lmax + 1, len(z)).
    """
    z_arr = np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t n = z_arr.shape[0]
    cdef int lhi = lmax + 1
    j_full = np.empty((lhi + 1, n), dtype=np.complex128)
    jp_full = np.empty((lhi + 1, n), dtype=np.complex128)

    cdef double complex[::1] zv = z_arr
    cdef double complex[:, ::1] jv = j_full
    cdef double complex[:, ::1] jpv = jp_full
    cdef Py_ssize_t i
    cdef int ell
    cdef double complex zi, inv_z

    for i in range(n):
        _jn_point(lhi, zv[i], jv, i)

    for i in range(n):
        zi = zv[i]
        if zi == 0:
            for ell in range(lhi + 1):
                jpv[ell, i] = 0.0
            jpv[1, i] = 1.0 / 3.0
            continue
        inv_z = 1.0 / zi
        jpv[0, i] = -jv[1, i]
        for ell in range(1, lhi + 1):
            jpv[ell, i] = jv[ell - 1, i] - <double>(ell + 1) * inv_z * jv[ell, i]

    return (np.ascontiguousarray(j_full[: lmax + 1]),
            np.ascontiguousarray(jp_full[: lmax + 1]))


def sph_yn_table(int lmax, z):
    """Spherical Bessel y_l(z) and y_l'(z) for l = 0..lmax (z != 0).

    Upward recurrence; y_l is the dominant solution in that direction for
    every argument, so the recurrence is stable at all orders used here.
    """
    z_arr = np.ascontiguousarray(z, dtype=np.complex128)
    if (z_arr == 0).any():
        raise ValueError("y_l(z) is singular at z = 0")
    cdef Py_ssize_t n = z_arr.shape[0]
    cdef int lhi = lmax + 1
    y_full = np.empty((lhi + 1, n), dtype=np.complex128)
    yp_full = np.empty((lhi + 1, n), dtype=np.complex128)

    cdef double complex[::1] zv = z_arr
    cdef double complex[:, ::1] yv = y_full
    cdef double complex[:, ::1] ypv = yp_full
    cdef Py_ssize_t i
    cdef int ell
    cdef double complex zi, inv_z, sin_z, cos_z

    for i in range(n):
        zi = zv[i]
        inv_z = 1.0 / zi
        _sincos(zi, &sin_z, &cos_z)
        yv[0, i] = -cos_z * inv_z
        yv[1, i] = (yv[0, i] - sin_z) * inv_z
        for ell in range(1, lhi):
            yv[ell + 1, i] = <double>(2 * ell + 1) * inv_z * yv[ell, i] - yv[ell - 1, i]
        ypv[0, i] = -yv[1, i]
        for ell in range(1, lhi + 1):
            ypv[ell, i] = yv[ell - 1, i] - <double>(ell + 1) * inv_z * yv[ell, i]

    return (np.ascontiguousarray(y_full[: lmax + 1]),
            np.ascontiguousarray(yp_full[: lmax + 1]))


def legendre_pmt_table(int lmax, int m, ct, st):
    """Associated-Legendre angular kernels for one azimuthal order m >= 0.

    Returns ``(P, pi, tau)`` of shape ``(lmax + 1, n)`` where row ``l``
    holds, at each point (ct = cos t, st = sin t >= 0):

    * ``P``   -- P_l^m(ct), unnormalized, no Condon-Shortley phase;
    * ``pi``  -- P_l^m(ct)/st, computed pole-safe (zero rows for m = 0,
      where the field components it feeds carry an explicit factor m);
    * ``tau`` -- d/dt P_l^m(ct).

    Rows with l < m are zero.
    """
    ct_arr = np.ascontiguousarray(ct, dtype=np.float64)
    st_arr = np.ascontiguousarray(st, dtype=np.float64)
    cdef Py_ssize_t n = ct_arr.shape[0]
    P = np.zeros((lmax + 1, n))
    pi = np.zeros((lmax + 1, n))
    tau = np.zeros((lmax + 1, n))
    if m > lmax:
        return P, pi, tau

    cdef double[::1] ctv = ct_arr
    cdef double[::1] stv = st_arr
    cdef double[:, ::1] Pv = P
    cdef double[:, ::1] piv = pi
    cdef double[:, ::1] tauv = tau
    cdef Py_ssize_t i
    cdef int ell, k
    cdef double c, s, p1_prev, p1, p1_next, dfac, stm

    if m == 0:
        for i in range(n):
            c = ctv[i]
            s = stv[i]
            Pv[0, i] = 1.0
            if lmax >= 1:
                Pv[1, i] = c
            for ell in range(1, lmax):
                Pv[ell + 1, i] = ((2 * ell + 1) * c * Pv[ell, i]
                                  - ell * Pv[ell - 1, i]) / (ell + 1)
            # dP_l/dt = -P_l^1: build the m = 1 row internally.
            if lmax >= 1:
                p1_prev = 0.0
                p1 = s  # P_1^1
                tauv[1, i] = -p1
                for ell in range(1, lmax):
                    p1_next = ((2 * ell + 1) * c * p1 - (ell + 1) * p1_prev) / ell
                    p1_prev = p1
                    p1 = p1_next
                    tauv[ell + 1, i] = -p1
        return P, pi, tau

    dfac = _double_factorial(2 * m - 1)
    for i in range(n):
        c = ctv[i]
        s = stv[i]
        stm = 1.0
        for k in range(m - 1):
            stm *= s
        piv[m, i] = dfac * stm
        Pv[m, i] = piv[m, i] * s
        if lmax > m:
            piv[m + 1, i] = (2 * m + 1) * c * piv[m, i]
            Pv[m + 1, i] = piv[m + 1, i] * s
        for ell in range(m + 1, lmax):
            Pv[ell + 1, i] = ((2 * ell + 1) * c * Pv[ell, i]
                              - (ell + m) * Pv[ell - 1, i]) / (ell - m + 1)
            piv[ell + 1, i] = ((2 * ell + 1) * c * piv[ell, i]
                               - (ell + m) * piv[ell - 1, i]) / (ell - m + 1)
        # sin t * dP/dt = l ct P_l - (l+m) P_{l-1}, divided through by sin t.
        tauv[m, i] = m * c * piv[m, i]
        for ell in range(m + 1, lmax + 1):
            tauv[ell, i] = ell * c * piv[ell, i] - (ell + m) * piv[ell - 1, i]
    return P, pi, tau
