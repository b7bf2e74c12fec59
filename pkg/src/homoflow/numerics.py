"""Shared numerical kernels: Chebyshev collocation, nonuniform finite
differences, a fixed-step 8th-order Runge-Kutta, and sequence extrapolation.
"""

import numpy as np
from numpy.polynomial import chebyshev as _cheb


# ---------------------------------------------------------------------------
# Chebyshev collocation in x = cos(theta)
# ---------------------------------------------------------------------------

def cheb_gauss_nodes(n):
    """Chebyshev-Gauss nodes (roots of T_n), ascending, all interior."""
    j = np.arange(n)
    return np.sort(np.cos((2 * j + 1) * np.pi / (2 * n)))


def theta_gauss_grid(n):
    """Ascending colatitude grid in the open interval (0, pi).

    arccos of the Chebyshev-Gauss nodes; polynomial collocation in
    x = cos(theta) on this grid is well conditioned and never touches
    the poles.
    """
    return np.sort(np.arccos(cheb_gauss_nodes(n)))


def cheb_transform_matrix(x):
    """Matrix mapping nodal values on x to Chebyshev coefficients."""
    n = len(x)
    v = _cheb.chebvander(x, n - 1)
    return np.linalg.inv(v)


def cheb_diff_matrices(x):
    """First- and second-derivative collocation matrices on nodes x.

    Built through the coefficient recurrence (values -> coefficients ->
    differentiated coefficients -> values), which keeps round-off growth
    mild compared with the direct formula.
    """
    n = len(x)
    v = _cheb.chebvander(x, n - 1)
    vinv = np.linalg.inv(v)
    m = np.zeros((n, n))
    for k in range(1, n):
        c = np.zeros(k + 1)
        c[k] = 1.0
        m[: k, k] = _cheb.chebder(c)
    d1 = v @ m @ vinv
    d2 = v @ m @ m @ vinv
    return d1, d2


def cheb_fit(x, values):
    """Chebyshev coefficients of the interpolant through (x, values)."""
    n = len(x)
    return np.linalg.solve(_cheb.chebvander(x, n - 1), np.asarray(values, float))


def cheb_eval(coeffs, x):
    return _cheb.chebval(x, coeffs)


def cheb_eval_deriv(coeffs, x, order=1):
    return _cheb.chebval(x, _cheb.chebder(coeffs, order))


# ---------------------------------------------------------------------------
# Finite differences on arbitrary 1D grids (Fornberg weights)
# ---------------------------------------------------------------------------

def fornberg_weights(z, x, m):
    """Weights of the length-len(x) stencil for derivatives 0..m at z."""
    x = np.asarray(x, float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def fd_diff_matrices(x, width=7):
    """Dense first/second derivative matrices from moving local stencils.

    ``width`` grid points per stencil (7 gives 6th/5th order for the
    first/second derivative on smooth grids).
    """
    x = np.asarray(x, float)
    n = len(x)
    width = min(width, n)
    d1 = np.zeros((n, n))
    d2 = np.zeros((n, n))
    half = width // 2
    for i in range(n):
        lo = min(max(i - half, 0), n - width)
        sl = slice(lo, lo + width)
        w = fornberg_weights(x[i], x[sl], 2)
        d1[i, sl] = w[:, 1]
        d2[i, sl] = w[:, 2]
    return d1, d2


# ---------------------------------------------------------------------------
# Quadrature helpers
# ---------------------------------------------------------------------------

def gauss_legendre(n, a=-1.0, b=1.0):
    """Gauss-Legendre nodes/weights mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def gauss_chebyshev(n):
    """Nodes/weights for integrals with 1/sqrt(1-t^2) weight on (-1, 1)."""
    j = np.arange(1, n + 1)
    t = np.cos((2 * j - 1) * np.pi / (2 * n))
    w = np.full(n, np.pi / n)
    return t, w


# ---------------------------------------------------------------------------
# Fixed-step Runge-Kutta of order 8 (Cooper-Verner, 11 stages)
# ---------------------------------------------------------------------------

def _cooper_verner_tableau(dtype):
    s = np.sqrt(np.asarray(21.0, dtype=dtype))
    one = np.asarray(1.0, dtype=dtype)

    def fr(p, q):
        return np.asarray(p, dtype=dtype) / np.asarray(q, dtype=dtype)

    a = np.zeros((11, 11), dtype=dtype)
    a[1, 0] = fr(1, 2)
    a[2, 0] = fr(1, 4)
    a[2, 1] = fr(1, 4)
    a[3, 0] = fr(1, 7)
    a[3, 1] = -(7 * one + 3 * s) / 98
    a[3, 2] = (21 * one + 5 * s) / 49
    a[4, 0] = (11 * one + s) / 84
    a[4, 2] = (18 * one + 4 * s) / 63
    a[4, 3] = (21 * one - s) / 252
    a[5, 0] = (5 * one + s) / 48
    a[5, 2] = (9 * one + s) / 36
    a[5, 3] = (-231 * one + 14 * s) / 360
    a[5, 4] = (63 * one - 7 * s) / 80
    a[6, 0] = (10 * one - s) / 42
    a[6, 2] = (-432 * one + 92 * s) / 315
    a[6, 3] = (633 * one - 145 * s) / 90
    a[6, 4] = (-504 * one + 115 * s) / 70
    a[6, 5] = (63 * one - 13 * s) / 35
    a[7, 0] = fr(1, 14)
    a[7, 4] = (14 * one - 3 * s) / 126
    a[7, 5] = (13 * one - 3 * s) / 63
    a[7, 6] = fr(1, 9)
    a[8, 0] = fr(1, 32)
    a[8, 4] = (91 * one - 21 * s) / 576
    a[8, 5] = fr(11, 72)
    a[8, 6] = -(385 * one + 75 * s) / 1152
    a[8, 7] = (63 * one + 13 * s) / 128
    a[9, 0] = fr(1, 14)
    a[9, 4] = fr(1, 9)
    a[9, 5] = -(733 * one + 147 * s) / 2205
    a[9, 6] = (515 * one + 111 * s) / 504
    a[9, 7] = -(51 * one + 11 * s) / 56
    a[9, 8] = (132 * one + 28 * s) / 245
    a[10, 4] = (-42 * one + 7 * s) / 18
    a[10, 5] = (-18 * one + 28 * s) / 45
    a[10, 6] = -(273 * one + 53 * s) / 72
    a[10, 7] = (301 * one + 53 * s) / 72
    a[10, 8] = (28 * one - 28 * s) / 45
    a[10, 9] = (49 * one - 7 * s) / 18

    b = np.zeros(11, dtype=dtype)
    b[0] = fr(1, 20)
    b[7] = fr(49, 180)
    b[8] = fr(16, 45)
    b[9] = fr(49, 180)
    b[10] = fr(1, 20)
    c = a.sum(axis=1)
    return a, b, c


def rk8_integrate(rhs, y0, t0, t1, n_steps, dtype=np.longdouble):
    """Fixed-step order-8 integration; returns (t, y) with y[step, :].

    ``rhs(t, y) -> dy`` must accept/return arrays matching y0.  The whole
    computation runs in ``dtype`` (extended precision by default), which
    keeps conserved quantities flat to ~1e-13 even for states of size 1e5.
    """
    a, b, c = _cooper_verner_tableau(dtype)
    y0 = np.asarray(y0, dtype=dtype)
    t = np.linspace(np.asarray(t0, dtype=dtype), np.asarray(t1, dtype=dtype),
                    n_steps + 1)
    h = (np.asarray(t1, dtype=dtype) - np.asarray(t0, dtype=dtype)) / n_steps
    out = np.empty((n_steps + 1,) + y0.shape, dtype=dtype)
    out[0] = y0
    k = [None] * 11
    y = y0.copy()
    nonzero = [[j for j in range(i) if a[i, j] != 0] for i in range(11)]
    for step in range(n_steps):
        ts = t[step]
        k[0] = rhs(ts, y)
        for i in range(1, 11):
            acc = sum(a[i, j] * k[j] for j in nonzero[i])
            k[i] = rhs(ts + c[i] * h, y + h * acc)
        incr = sum(b[i] * k[i] for i in range(11) if b[i] != 0)
        y = y + h * incr
        out[step + 1] = y
    return t, out


# ---------------------------------------------------------------------------
# Extrapolation of h-refinement sequences
# ---------------------------------------------------------------------------

def observed_order(h_values, norms, floor=1e-300):
    """Least-squares slope of log(norm) against log(h)."""
    h = np.asarray(h_values, float)
    r = np.maximum(np.asarray(norms, float), floor)
    return float(np.polyfit(np.log(h), np.log(r), 1)[0])


def richardson_limit(h_values, samples, orders=None):
    """Eliminate the leading error terms of signed FD samples.

    ``samples`` has shape (len(h_values), ...) with h in fixed ratio; the
    expansion is assumed even in h (central differences), so successive
    rounds remove h^2, h^4, h^6, ...  Returns the extrapolated h -> 0
    array built from the finest entries.
    """
    h = np.asarray(h_values, float)
    if orders is None:
        orders = [2 * (i + 1) for i in range(len(h) - 1)]
    tab = [np.asarray(s, float) for s in samples]
    for p in orders:
        if len(tab) < 2:
            break
        new = []
        for i in range(len(tab) - 1):
            rho = (h[i] / h[i + 1]) ** p
            new.append((rho * tab[i + 1] - tab[i]) / (rho - 1.0))
        tab = new
        h = h[1:]
    return tab[-1]
