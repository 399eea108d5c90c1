"""Generic numerical engines: complex root finding, dense eigenproblems,
smallest singular values, and quadrature over a ball.

The root finder is a grid-seeded Muller iteration targeted at analytic
functions on a rectangle of the complex frequency plane.  Roots are only
accepted when the final residual is below tolerance *and* the residual
decreased monotonically over the last iterations, which rejects the slow
creep that Muller exhibits near branch-like features.

Linear algebra is delegated to LAPACK through numpy (``eig``/``svd``);
closed-form 1x1/2x2 eigensolutions are exposed separately and used as
cross-checks by callers and tests.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "RootCandidate",
    "ComplexScan",
    "find_roots",
    "scan_roots",
    "muller",
    "eig_dense",
    "eig_closed_form",
    "smallest_singular_value",
    "integrate_ball",
    "ball_quadrature",
    "worker_count",
    "parallel_map",
]


# ---------------------------------------------------------------------------
# Muller's method
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootCandidate:
    """One refined root candidate from a complex scan."""

    z: complex
    residual: float
    converged: bool
    iterations: int


@dataclass
class ComplexScan:
    """Result of a windowed root scan.

    ``roots`` holds the accepted (converged, deduplicated) roots sorted by
    real part; ``rejected`` the candidates that failed the acceptance rule,
    kept for diagnostics (CLI exit-code logic inspects them).
    """

    window: tuple[complex, complex]
    grid: tuple[int, int]
    roots: list[complex] = field(default_factory=list)
    rejected: list[RootCandidate] = field(default_factory=list)


def muller(
    f: Callable[[complex], complex],
    x0: complex,
    x1: complex,
    x2: complex,
    tol: float = 1e-11,
    max_iter: int = 60,
) -> RootCandidate:
    """Muller's method from three starting points.

    Convergence requires both |f| < tol at the final iterate and a
    monotonically decreasing |f| over the last three accepted steps.
    """
    pts = [x0, x1, x2]
    vals = [complex(f(x)) for x in pts]
    history = [abs(v) for v in vals]
    z = pts[-1]
    for it in range(max_iter):
        (a, b, c), (fa, fb, fc) = pts, vals
        q = (c - b) / (b - a) if b != a else 0.5
        A = q * fc - q * (1 + q) * fb + q * q * fa
        B = (2 * q + 1) * fc - (1 + q) * (1 + q) * fb + q * q * fa
        C = (1 + q) * fc
        disc = np.sqrt(complex(B * B - 4 * A * C))
        den1, den2 = B + disc, B - disc
        den = den1 if abs(den1) >= abs(den2) else den2
        if den == 0:
            break
        z = c - (c - b) * 2 * C / den
        fz = complex(f(z))
        pts = [b, c, z]
        vals = [fb, fc, fz]
        history.append(abs(fz))
        if abs(fz) < tol:
            last = history[-3:]
            monotone = all(last[i + 1] <= last[i] for i in range(len(last) - 1))
            return RootCandidate(z, abs(fz), monotone, it + 1)
        if not np.isfinite(abs(fz)):
            break
        if abs(z - c) < 1e-15 * max(1.0, abs(z)):
            break
    return RootCandidate(z, history[-1], False, max_iter)


def _grid_minima(fvals: np.ndarray) -> list[tuple[int, int]]:
    """Indices of strict-or-plateau local minima of |f| on the scan grid."""
    mins = []
    nr, ni = fvals.shape
    for i in range(nr):
        for j in range(ni):
            v = fvals[i, j]
            neighbors = fvals[max(0, i - 1) : i + 2, max(0, j - 1) : j + 2]
            if v <= neighbors.min():
                mins.append((i, j))
    return mins


def scan_roots(
    f: Callable[[complex], complex],
    window: tuple[complex, complex],
    grid: tuple[int, int] = (40, 24),
    tol: float = 1e-9,
    dedup: float | None = None,
) -> ComplexScan:
    """Grid-scan a rectangular window for roots of analytic f.

    ``window`` is (lower-left, upper-right) in the complex plane.  |f| is
    sampled on the grid; every local minimum seeds a Muller refinement.
    Converged roots within the window are deduplicated and sorted by real
    part.  Non-converged candidates are reported in ``rejected``.
    """
    lo, hi = complex(window[0]), complex(window[1])
    if not (hi.real > lo.real and hi.imag > lo.imag):
        raise ValueError("window must satisfy hi.real > lo.real and hi.imag > lo.imag")
    nr, ni = grid
    re = np.linspace(lo.real, hi.real, nr)
    im = np.linspace(lo.imag, hi.imag, ni)
    fvals = np.empty((nr, ni))
    for i, x in enumerate(re):
        for j, y in enumerate(im):
            fv = f(complex(x, y))
            fvals[i, j] = abs(fv) if np.isfinite(abs(fv)) else np.inf

    scan = ComplexScan(window=(lo, hi), grid=(nr, ni))
    hr = (re[1] - re[0]) if nr > 1 else (hi.real - lo.real)
    hi_step = (im[1] - im[0]) if ni > 1 else (hi.imag - lo.imag)
    if dedup is None:
        dedup = 1e-7 * max(abs(lo), abs(hi), 1.0)

    seen: list[complex] = []
    for i, j in _grid_minima(fvals):
        z0 = complex(re[i], im[j])
        cand = muller(f, z0 - 0.3 * hr, z0 + 0.25j * hi_step, z0, tol=tol)
        z = cand.z
        inside = (lo.real - hr <= z.real <= hi.real + hr) and (
            lo.imag - hi_step <= z.imag <= hi.imag + hi_step
        )
        if cand.converged and inside:
            if all(abs(z - s) > dedup for s in seen):
                seen.append(z)
        elif cand.residual < 1e3 * tol:
            scan.rejected.append(cand)
    scan.roots = sorted(seen, key=lambda w: (w.real, w.imag))
    return scan


def find_roots(
    f: Callable[[complex], complex],
    window: tuple[complex, complex],
    grid: tuple[int, int] = (40, 24),
    tol: float = 1e-9,
) -> list[complex]:
    """Converged, deduplicated roots of f in the window, sorted by real part."""
    return scan_roots(f, window, grid=grid, tol=tol).roots


# ---------------------------------------------------------------------------
# Dense eigenproblems and singular values
# ---------------------------------------------------------------------------


def eig_closed_form(M: np.ndarray):
    """Closed-form eigendecomposition for 1x1 and 2x2 matrices.

    Used as an independent cross-check of the LAPACK path.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape == (1, 1):
        return np.array([M[0, 0]]), np.array([[1.0 + 0j]])
    if M.shape != (2, 2):
        raise ValueError("closed form implemented for 1x1 and 2x2 only")
    a, b, c, d = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    disc = np.sqrt(complex((a - d) * (a - d) + 4 * b * c))
    lam1 = (a + d + disc) / 2
    lam2 = (a + d - disc) / 2
    vecs = []
    for lam in (lam1, lam2):
        if abs(b) >= abs(c) and b != 0:
            v = np.array([b, lam - a])
        elif c != 0:
            v = np.array([lam - d, c])
        else:  # diagonal matrix
            v = np.array([1.0, 0.0]) if abs(a - lam) <= abs(d - lam) else np.array([0.0, 1.0])
        v = v / np.abs(v).max()  # prescale so the norm cannot underflow
        vecs.append(v / np.linalg.norm(v))
    return np.array([lam1, lam2]), np.column_stack(vecs)


def eig_dense(M: np.ndarray):
    """Eigenvalues and right eigenvectors of a dense complex matrix.

    Contract: every pair satisfies ||M v - lambda v|| <= 1e-8 ||M|| with
    unit-norm v, and the eigenvalue sum matches the trace to 1e-10
    (relative).  Violations raise ArithmeticError.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got shape {M.shape}")
    if M.shape[0] == 0:
        raise ValueError("empty matrix")
    w, v = np.linalg.eig(M)
    scale = np.linalg.norm(M)
    if scale == 0:
        return w, v
    resid = np.linalg.norm(M @ v - v * w[None, :], axis=0)
    if np.any(resid > 1e-8 * scale):
        raise ArithmeticError(f"eigenpair residual {resid.max():.3e} exceeds 1e-8 * ||M||")
    tr = np.trace(M)
    if abs(w.sum() - tr) > 1e-10 * max(abs(tr), scale):
        raise ArithmeticError("eigenvalue sum does not match trace to 1e-10")
    return w, v


def smallest_singular_value(M: np.ndarray) -> float:
    """Smallest singular value of a (possibly rectangular) complex matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or min(M.shape) == 0:
        raise ValueError(f"nonempty 2-D matrix required, got shape {M.shape}")
    return float(np.linalg.svd(M, compute_uv=False)[-1])


# ---------------------------------------------------------------------------
# Quadrature over a ball
# ---------------------------------------------------------------------------


def ball_quadrature(radius: float, orders: tuple[int, int, int] = (32, 32, 32)):
    """Quadrature nodes/weights for integrals over a ball at the origin.

    Gauss-Legendre in radius and in cos(polar angle), uniform (periodic
    trapezoid) in azimuth.  Returns ``(points, weights)`` with points of
    shape (N, 3); the weights include the r^2 volume element.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    n_r, n_t, n_p = orders
    if min(orders) < 2:
        raise ValueError("all quadrature orders must be >= 2")
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * radius * (xr + 1.0)
    wr = 0.5 * radius * wr * r**2
    ct, wt = np.polynomial.legendre.leggauss(n_t)
    st = np.sqrt(1.0 - ct**2)
    phi = np.linspace(0.0, 2 * np.pi, n_p, endpoint=False)
    wp = 2 * np.pi / n_p

    R, CT, PHI = np.meshgrid(r, ct, phi, indexing="ij")
    ST = np.sqrt(1.0 - CT**2)
    pts = np.column_stack(
        [
            (R * ST * np.cos(PHI)).ravel(),
            (R * ST * np.sin(PHI)).ravel(),
            (R * CT).ravel(),
        ]
    )
    W = (wr[:, None, None] * wt[None, :, None] * wp * np.ones_like(PHI)).ravel()
    return pts, W


def integrate_ball(
    g: Callable[[np.ndarray], np.ndarray],
    radius: float,
    orders: tuple[int, int, int] = (32, 32, 32),
) -> complex:
    """Integral of g over the ball of given radius centered at the origin.

    ``g`` maps an (N, 3) array of Cartesian points to N (complex) values.
    Non-finite samples are reported with their location rather than
    silently polluting the sum.
    """
    pts, w = ball_quadrature(radius, orders)
    vals = np.asarray(g(pts))
    if vals.shape != w.shape:
        raise ValueError(f"integrand returned shape {vals.shape}, expected {w.shape}")
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ArithmeticError(
            f"integrand returned non-finite value {vals[i]} at point {pts[i]} "
            f"({int(bad.sum())} bad samples total)"
        )
    return complex(np.sum(w * vals))


# ---------------------------------------------------------------------------
# Worker pool
# ---------------------------------------------------------------------------


def worker_count() -> int:
    """Worker cap honoring the PLASMON_THREADS environment variable."""
    n_cpu = os.cpu_count() or 1
    env = os.environ.get("PLASMON_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"PLASMON_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ValueError("PLASMON_THREADS must be >= 1")
        return min(n, n_cpu)
    return n_cpu


def parallel_map(fn: Callable, items: Sequence) -> list:
    """Order-preserving map over items using the configured worker pool.

    Results are reduced in input order, so outputs are deterministic and
    independent of scheduling (and of PLASMON_THREADS).
    """
    items = list(items)
    workers = min(worker_count(), max(1, len(items)))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
