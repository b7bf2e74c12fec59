"""Complete elliptic integrals in the +kappa convention, and the period
function controlling the zero-flux profiles on the circle.

The integrals used throughout are

    F(kappa) = int_0^{pi/2} dphi / sqrt(1 + kappa sin^2 phi),
    E(kappa) = int_0^{pi/2} sqrt(1 + kappa sin^2 phi) dphi,

with kappa >= 0.  They are the classical complete integrals evaluated at
*negative* parameter: F(kappa) = K(m), E(kappa) = Ell_E(m) with m = -kappa
(so users of standard tables should substitute m = -kappa, and vice versa).
Evaluation goes through the imaginary-modulus transformation

    K(-kappa) = K(m1) / sqrt(1 + kappa),   E(-kappa) = sqrt(1 + kappa) E(m1),

with m1 = kappa / (1 + kappa) in [0, 1), followed by the arithmetic-
geometric-mean recurrence, which is accurate to a few ulps for any
kappa >= 0 and works in extended precision when handed longdouble input.

The period function

    H(kappa) = 2 F(kappa) (E(kappa) - (2 + kappa)/3 F(kappa))

is pi^2/6 at kappa = 0, strictly decreasing for kappa > 0, and crosses
zero at a single kappa_inf > 0.
"""

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "first_kind", "second_kind", "both_kinds",
    "first_kind_deriv", "second_kind_deriv",
    "period_function", "invert_period", "period_zero_crossing",
    "classical_parameter", "table",
]

_AGM_ITERS = 32


def _check_kappa(kappa):
    k = np.asarray(kappa)
    if np.any(k < 0) or not np.all(np.isfinite(k)):
        raise ValueError("kappa must be finite and >= 0")


def _agm_pair(m1, b0):
    """K(m1) and E(m1) for parameter m1 in [0, 1) via the AGM.

    ``b0`` is sqrt(1 - m1) supplied by the caller, who can usually form it
    without cancellation.  Values keep the dtype of the inputs.
    """
    one = np.asarray(1.0, dtype=m1.dtype)
    pi = 4 * np.arctan(one)
    a = np.ones_like(m1)
    b = np.array(b0, copy=True)
    s = 0.5 * m1              # 2^{-1} c_0^2 with c_0^2 = m1
    pw = np.asarray(0.5, dtype=m1.dtype)
    for _ in range(_AGM_ITERS):
        c = 0.5 * (a - b)
        pw = pw * 2
        s = s + pw * c * c
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(c == 0):
            break
    big_k = pi / (2 * a)
    big_e = big_k * (one - s)
    return big_k, big_e


def both_kinds(kappa):
    """(F(kappa), E(kappa)) in the +kappa convention; vectorized."""
    _check_kappa(kappa)
    k = np.asarray(kappa)
    dtype = k.dtype if k.dtype == np.dtype(np.longdouble) else np.dtype(float)
    k = k.astype(dtype)
    root = np.sqrt(1 + k)
    m1 = k / (1 + k)
    big_k, big_e = _agm_pair(m1, 1 / root)   # sqrt(1 - m1) == 1/sqrt(1+kappa)
    f = big_k / root
    e = root * big_e
    if np.isscalar(kappa) or np.ndim(kappa) == 0:
        return dtype.type(f), dtype.type(e)
    return f, e


def first_kind(kappa):
    """F(kappa) = int_0^{pi/2} dphi / sqrt(1 + kappa sin^2 phi)."""
    return both_kinds(kappa)[0]


def second_kind(kappa):
    """E(kappa) = int_0^{pi/2} sqrt(1 + kappa sin^2 phi) dphi."""
    return both_kinds(kappa)[1]


def first_kind_deriv(kappa):
    """dF/dkappa = (E/(1+kappa) - F) / (2 kappa); -pi/8 at kappa = 0."""
    _check_kappa(kappa)
    k = np.asarray(kappa, float)
    f, e = both_kinds(np.where(k == 0, 1.0, k))
    out = np.where(k == 0, -np.pi / 8,
                   (e / (1 + k) - f) / np.where(k == 0, 1.0, 2 * k))
    return float(out) if np.ndim(kappa) == 0 else out


def second_kind_deriv(kappa):
    """dE/dkappa = (E - F) / (2 kappa); pi/8 at kappa = 0."""
    _check_kappa(kappa)
    k = np.asarray(kappa, float)
    f, e = both_kinds(np.where(k == 0, 1.0, k))
    out = np.where(k == 0, np.pi / 8, (e - f) / np.where(k == 0, 1.0, 2 * k))
    return float(out) if np.ndim(kappa) == 0 else out


def period_function(kappa):
    """H(kappa) = 2 F (E - (2+kappa)/3 F); the squared rescaled period."""
    f, e = both_kinds(kappa)
    k = np.asarray(kappa, dtype=np.asarray(f).dtype)
    out = 2 * f * (e - (2 + k) / 3 * f)
    if np.ndim(kappa) == 0:
        return type(f)(out)
    return out


_H0 = np.pi ** 2 / 6


def period_zero_crossing(tol=1e-12):
    """The unique kappa_inf > 0 with H(kappa_inf) = 0."""
    hi = 2.0
    while period_function(hi) > 0:
        hi *= 2.0
    return brentq(period_function, hi / 2, hi, xtol=tol)


def invert_period(target, tol=1e-12):
    """Solve H(kappa) = target for kappa >= 0.

    Returns the unique root (H is strictly decreasing), or None when
    target exceeds H(0) = pi^2/6.  Targets within a few ulps of H(0)
    map to exactly 0: H has a critical point there, so root extraction
    right at the top of the range is ill-conditioned.
    """
    if not np.isfinite(target) or target <= 0:
        raise ValueError("target must be a positive finite number")
    h0 = period_function(0.0)
    snap = 16 * np.finfo(float).eps * h0
    if target > h0 + snap:
        return None
    if abs(target - h0) <= snap:
        return 0.0
    hi = 2 * period_zero_crossing()
    return brentq(lambda k: period_function(k) - target, 0.0, hi, xtol=tol)


def classical_parameter(kappa):
    """Parameter m of the standard tables equivalent to this kappa."""
    return -np.asarray(kappa, float)


def table(kappa_min, kappa_max, points):
    """Rows (kappa, F, E, dF, dE, H) on a uniform kappa grid."""
    if points < 1 or kappa_min < 0 or kappa_max < kappa_min:
        raise ValueError("need 0 <= kappa_min <= kappa_max and points >= 1")
    grid = np.linspace(kappa_min, kappa_max, points)
    f, e = both_kinds(grid)
    rows = np.column_stack([
        grid, f, e,
        np.atleast_1d(first_kind_deriv(grid)),
        np.atleast_1d(second_kind_deriv(grid)),
        np.atleast_1d(period_function(grid)),
    ])
    return rows
