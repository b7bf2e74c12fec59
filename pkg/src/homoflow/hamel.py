"""Zero-flux (-1)-homogeneous flows on the punctured plane.

On the circle the unknowns reduce to the swirl v(theta), the radial
component f(theta) and the pressure p(theta).  Zero flux through the
origin means f has zero mean.  Two families exhaust the solutions:

* constants: f = 0, v = const, p = -v^2/2;
* pure-radial oscillations: v = 0 and f solving

      f'' = -4 f - f^2 + b

  i.e. unit-mass motion in the cubic well V(u) = u^3/3 + 2 u^2 - b u with
  energy (u')^2 = 2 E - 2 V(u).  Bounded orbits live between roots
  e1 >= e2 of the cubic 2E - 2V(u) = -(2/3)(u - e1)(u - e2)(u - e3); on
  the circle the orbit must close with minimal period 2 pi / k, and the
  zero-mean constraint then pins, for every integer k >= 3, a unique root
  triple with e1 + e2 + e3 = -6.  Parametrizing kappa = (e1-e2)/(e2-e3),
  delta = e2 - e3, the period and flux conditions become

      delta = 2 F(kappa) / (E(kappa) - (2+kappa)/3 F(kappa)),
      H(kappa) = 2 pi^2 / (3 k^2),

  with F, E, H from :mod:`homoflow.elliptic`.  k = 1 has no solution
  (the target exceeds H(0) = pi^2/6) and k = 2 only the degenerate triple
  (0, 0, -6), i.e. the zero profile: the cos(2 theta) mode of the
  linearized problem does not deform into a nonlinear solution.

Profiles are integrated with a fixed-step order-8 Runge-Kutta in extended
precision: root triples reach ~1e2 and energies ~1e6 by k = 8, where
float64 evaluation of the energy invariant alone would exceed the 1e-10
conservation budget.

The pressure follows from (p - 2f)' = 0 and the radial momentum balance:
p = 2 f - b/2.

``stokes_green`` evaluates the derivative kernel

    G_ijk(x) = (1/4pi) d/dx_k [delta_ij log(1/|x|) + x_i x_j / |x|^2]

whose column G_.11 is the velocity of a unit dipole forcing; it is the
homogeneous extension of a pure radial cos-2theta profile of amplitude
1/(4 pi) (phase-shifted by pi/2 relative to +cos(2 theta): direct
differentiation of the kernel gives f(theta) = -cos(2 theta)/(4 pi)).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import elliptic
from .numerics import gauss_chebyshev, rk8_integrate

__all__ = [
    "RootTriple", "ModeSolution", "HamelProfile", "ConstantBranch",
    "roots_for_mode", "derived_constants", "integrate_profile",
    "pressure_of_profile", "constant_branch", "stokes_green",
    "green_dipole_pressure", "mode2_exclusion", "amplitude_limit",
    "oscillation_period", "mean_flux_integral",
    "shooting_sweep", "classification_scan", "mode_catalog",
    "TWO_PI",
]

TWO_PI = 2.0 * math.pi
_LD = np.longdouble


@dataclass(frozen=True)
class RootTriple:
    """Roots e1 >= e2 >= e3 of the orbit cubic, constrained to sum to -6."""

    e1: float
    e2: float
    e3: float

    def __post_init__(self):
        if not (self.e1 >= self.e2 >= self.e3):
            raise ValueError("roots must be ordered e1 >= e2 >= e3")
        if abs(float(self.e1 + self.e2 + self.e3 + 6.0)) > 1e-12:
            raise ValueError("root triple must satisfy e1 + e2 + e3 = -6")

    def as_tuple(self):
        return (self.e1, self.e2, self.e3)


@dataclass(frozen=True)
class ModeSolution:
    """Root data selected by the period/flux conditions for mode k."""

    k: int
    kappa: float
    delta: float
    roots: RootTriple
    trivial: bool


@dataclass(frozen=True)
class ConstantBranch:
    """The swirl-only family: f = 0, v = const, p = -v^2/2."""

    v_const: float
    f_const: float = 0.0
    p_const: float = field(default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "p_const", -0.5 * self.v_const ** 2)

    def bernoulli_defect(self):
        return self.f_const ** 2 + self.v_const ** 2 + 2 * self.p_const


@dataclass
class HamelProfile:
    """Sampled radial profile for one mode, with its conserved data.

    Arrays are extended precision; ``thetas`` closes the circle (first and
    last sample are the same point, one period apart).
    """

    k: int
    roots: RootTriple
    b_const: float
    energy_E: float
    theta0: float
    thetas: np.ndarray
    f: np.ndarray
    f_deriv: np.ndarray
    p: np.ndarray
    c_pressure: float
    energy_drift: float
    closure_defect: float

    @property
    def amplitude(self):
        return float(np.max(self.f) - np.min(self.f))

    def mean(self):
        """Trapezoid mean over the closed circle."""
        return float(np.trapezoid(self.f, self.thetas) / TWO_PI)

    def period_defect(self):
        """Largest discrepancy between samples one period 2 pi/k apart."""
        n = len(self.thetas) - 1
        shift = n // self.k
        return float(np.max(np.abs(self.f[:-shift] - self.f[shift:])))

    def local_max_count(self):
        inner = self.f[:-1]
        left = np.roll(inner, 1)
        right = np.roll(inner, -1)
        return int(np.sum((inner > left) & (inner > right)))


def mode2_exclusion():
    """Structured record of the k = 1 and k = 2 exclusions."""
    assert elliptic.invert_period(np.pi ** 2 / 6) == 0.0
    assert roots_for_mode(1) is None
    sol = roots_for_mode(2)
    return {"k": 2, "kappa": sol.kappa, "nontrivial": not sol.trivial}


def roots_for_mode(k):
    """Root triple for minimal period 2 pi / k, or None when none exists.

    k = 1 has no solution; k = 2 returns the degenerate triple (0, 0, -6)
    flagged trivial; k >= 3 returns a nondegenerate triple.
    """
    if not isinstance(k, (int, np.integer)) or k <= 0:
        raise ValueError("mode number k must be a positive integer")
    target = 2 * np.pi ** 2 / (3 * k ** 2)
    kappa = elliptic.invert_period(target)
    if kappa is None:
        return None
    if kappa == 0.0:
        triple = RootTriple(_LD(0.0), _LD(0.0), _LD(-6.0))
        return ModeSolution(int(k), 0.0, 6.0, triple, True)
    kl = _LD(kappa)
    f, e = elliptic.both_kinds(kl)
    delta = 2 * f / (e - (2 + kl) / 3 * f)
    e2 = (-6 - (kl - 1) * delta) / 3
    triple = RootTriple(e2 + kl * delta, e2, e2 - delta)
    return ModeSolution(int(k), float(kappa), float(delta), triple, False)


def derived_constants(roots):
    """(b, E) from coefficient matching of the orbit cubic.

    2E - 2V(u) = -(2/3)(u-e1)(u-e2)(u-e3) forces b = -(e1 e2 + e1 e3 +
    e2 e3)/3 and E = e1 e2 e3 / 3; the quadratic coefficient reproduces
    the sum constraint, which is validated here.
    """
    e1, e2, e3 = roots.as_tuple()
    if abs(float(e1 + e2 + e3 + 6.0)) > 1e-10:
        raise ValueError("root triple violates the sum constraint")
    b = -(e1 * e2 + e1 * e3 + e2 * e3) / 3
    energy = e1 * e2 * e3 / 3
    return b, energy


def potential_value(u, b):
    """Well potential V(u) = u^3/3 + 2u^2 - b u (any dtype)."""
    return u * u * u / 3 + 2 * u * u - b * u


def integrate_profile(roots, k, theta0=0.0, n_steps=20000):
    """Integrate f'' = -4f - f^2 + b over one full circle.

    Starts at the orbit maximum (f = e1, f' = 0) and runs a fixed-step
    order-8 Runge-Kutta in extended precision; n_steps is rounded up to a
    multiple of 2k so the sample grid hits every extremum exactly.  The
    stored profile is re-phased so its maximum sits at theta0.
    """
    if k < 3:
        raise ValueError("nondegenerate profiles require k >= 3")
    if roots.e1 <= roots.e2:
        raise ValueError("degenerate root triple: no oscillation to integrate")
    b, energy = derived_constants(roots)
    b = _LD(b)
    energy = _LD(energy)
    n_steps = int(math.ceil(n_steps / (2 * k)) * 2 * k)

    def rhs(_t, y):
        return np.array([y[1], -4 * y[0] - y[0] * y[0] + b], dtype=_LD)

    y0 = np.array([roots.e1, 0.0], dtype=_LD)
    t, y = rk8_integrate(rhs, y0, 0.0, TWO_PI, n_steps)
    u, up = y[:, 0], y[:, 1]

    drift = np.abs(up * up + 2 * potential_value(u, b) - 2 * energy)
    closure = float(abs(u[-1] - u[0]) + abs(up[-1] - up[0]))

    # re-phase: stored f(theta) = u(theta - theta0) on a sorted circle grid
    if theta0 != 0.0:
        tw = np.asarray((t[:-1] + _LD(theta0)) % _LD(TWO_PI))
        order = np.argsort(tw)
        th = np.concatenate([tw[order], [tw[order][0] + _LD(TWO_PI)]])
        uu = np.concatenate([u[:-1][order], [u[:-1][order][0]]])
        uup = np.concatenate([up[:-1][order], [up[:-1][order][0]]])
    else:
        th, uu, uup = t, u, up

    c_pressure = float(-b / 2)
    profile = HamelProfile(
        k=int(k), roots=roots, b_const=float(b), energy_E=float(energy),
        theta0=float(theta0), thetas=th, f=uu, f_deriv=uup,
        p=2 * uu + _LD(c_pressure), c_pressure=c_pressure,
        energy_drift=float(drift.max()), closure_defect=closure,
    )
    scale = max(1.0, profile.amplitude)
    if profile.period_defect() > 1e-6 * scale:
        raise ArithmeticError(
            f"integrated profile is not 2 pi/{k} periodic "
            f"(defect {profile.period_defect():.3e}); root triple is "
            "inconsistent with the requested mode")
    return profile


def pressure_of_profile(profile):
    """(theta, p) samples; p = 2 f + C with C = -b/2.

    The constant is forced by substituting p = 2f + C into the radial
    momentum balance -f'' - f^2 - 2p = 0 and matching the oscillator
    equation f'' = -4f - f^2 + b.
    """
    return np.column_stack([np.asarray(profile.thetas, float),
                            np.asarray(profile.p, float)])


def constant_branch(v):
    return ConstantBranch(float(v))


def stokes_green(i, j, k, x):
    """Derivative kernel G_ijk at points x (1-based indices, 2D).

    G_ijk = (1/4pi) d_k [delta_ij log(1/|x|) + x_i x_j/|x|^2]; exactly
    (-1)-homogeneous.
    """
    for idx in (i, j, k):
        if idx not in (1, 2):
            raise ValueError("indices are 1-based and must be 1 or 2")
    x = np.asarray(x, float)
    squeeze = x.ndim == 1
    pts = np.atleast_2d(x)
    r2 = np.sum(pts ** 2, axis=1)
    if np.any(r2 == 0):
        raise ValueError("the kernel is singular at the origin")
    xi, xj, xk = pts[:, i - 1], pts[:, j - 1], pts[:, k - 1]
    dij = 1.0 if i == j else 0.0
    dik = 1.0 if i == k else 0.0
    djk = 1.0 if j == k else 0.0
    val = (-dij * xk + dik * xj + djk * xi) / r2 - 2 * xi * xj * xk / r2 ** 2
    val /= 4 * np.pi
    return float(val[0]) if squeeze else val


def green_dipole_pressure(x):
    """Pressure completing G_.11 to a Stokes solution off the origin.

    The pressure of a unit point force is x_j/(2 pi |x|^2); applying the
    same dipole derivative gives P = (1/2pi) d_1 (x_1/|x|^2)
    = (1 - 2 x_1^2/|x|^2) / (2 pi |x|^2) = -cos(2 theta)/(2 pi |x|^2).
    """
    x = np.asarray(x, float)
    squeeze = x.ndim == 1
    pts = np.atleast_2d(x)
    r2 = np.sum(pts ** 2, axis=1)
    if np.any(r2 == 0):
        raise ValueError("singular at the origin")
    val = (1.0 - 2.0 * pts[:, 0] ** 2 / r2) / (2 * np.pi * r2)
    return float(val[0]) if squeeze else val


def amplitude_limit():
    """Large-k limit of (e1 - e2)/k^2: 6 kappa_inf F(kappa_inf)^2 / pi^2."""
    kinf = elliptic.period_zero_crossing()
    f = elliptic.first_kind(kinf)
    return 6 * kinf * f ** 2 / np.pi ** 2


# ---------------------------------------------------------------------------
# Raw-integral oracles: period and flux straight from the orbit cubic
# ---------------------------------------------------------------------------

def _orbit_quadrature(e1, e2, e3, n):
    """(T, I) with T = int du/sqrt((e1-u)(u-e2)(u-e3)), I = int u du/sqrt(...).

    Gauss-Chebyshev absorbs the inverse-square-root endpoints exactly;
    1/sqrt(u - e3) is analytic on [e2, e1] since e3 < e2.
    """
    t, w = gauss_chebyshev(n)
    mid = 0.5 * (e1 + e2)
    half = 0.5 * (e1 - e2)
    u = mid + half * t
    g = w / np.sqrt(u - e3)
    return float(np.sum(g)), float(np.sum(g * u))


def oscillation_period(roots, n=400):
    """T of the orbit with the given roots, by direct quadrature."""
    e1, e2, e3 = (float(v) for v in roots.as_tuple())
    if not e1 > e2 > e3:
        raise ValueError("quadrature needs distinct roots")
    return _orbit_quadrature(e1, e2, e3, n)[0]


def mean_flux_integral(roots, n=400):
    """I = int u du/sqrt((e1-u)(u-e2)(u-e3)); zero for zero-flux triples."""
    e1, e2, e3 = (float(v) for v in roots.as_tuple())
    if not e1 > e2 > e3:
        raise ValueError("quadrature needs distinct roots")
    return _orbit_quadrature(e1, e2, e3, n)[1]


# ---------------------------------------------------------------------------
# Brute-force classification of periodic zero-mean orbits
# ---------------------------------------------------------------------------

def mode_catalog(b_max, u_min, u_max, k_max=24):
    """All (b, starting value) pairs of the known families inside a box.

    Each mode k contributes both turning points (b_k, e1_k), (b_k, e2_k);
    the zero solution contributes (0, 0).
    """
    entries = [{"label": "zero", "k": 0, "b": 0.0, "u0": 0.0}]
    for k in range(3, k_max + 1):
        sol = roots_for_mode(k)
        b, _ = derived_constants(sol.roots)
        b = float(b)
        if b > b_max:
            break
        for u0, side in ((float(sol.roots.e1), "max"), (float(sol.roots.e2), "min")):
            if u_min <= u0 <= u_max:
                entries.append({"label": f"k={k}/{side}", "k": k, "b": b, "u0": u0})
    return entries


def shooting_sweep(b_values, u0_values, n_steps=16000, blowup=1e6):
    """Vectorized RK4 shooting of the radial oscillator over a (b, u0) grid.

    Integrates f'' = -4f - f^2 + b with f(0) = u0, f'(0) = 0 over one
    circle for every grid point simultaneously and reports the
    return defect |f(2pi) - u0| + |f'(2pi)| and the trapezoid mean.
    Trajectories that blow up carry an infinite defect.
    """
    b = np.asarray(b_values, float)
    u0 = np.asarray(u0_values, float)
    bb, uu = np.meshgrid(b, u0, indexing="ij")
    bf = bb.ravel()
    u = uu.ravel().copy()
    v = np.zeros_like(u)
    h = TWO_PI / n_steps
    mean_acc = 0.5 * u.copy()
    start = u.copy()
    alive = np.ones(u.shape, dtype=bool)

    def acc(uu_):
        return -4.0 * uu_ - uu_ * uu_ + bf

    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(n_steps):
            k1u, k1v = v, acc(u)
            k2u, k2v = v + 0.5 * h * k1v, acc(u + 0.5 * h * k1u)
            k3u, k3v = v + 0.5 * h * k2v, acc(u + 0.5 * h * k2u)
            k4u, k4v = v + h * k3v, acc(u + h * k3u)
            u = u + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
            v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
            bad = ~np.isfinite(u) | ~np.isfinite(v) | (np.abs(u) > blowup)
            if bad.any():
                alive &= ~bad
                u[bad] = 0.0
                v[bad] = 0.0
            if step < n_steps - 1:
                mean_acc += u
            else:
                mean_acc += 0.5 * u

    shape = bb.shape
    ret = np.abs(u - start) + np.abs(v)
    mean = mean_acc * h / TWO_PI
    defect = ret + np.abs(mean)
    defect[~alive] = np.inf
    return {
        "b": bb, "u0": uu,
        "return_defect": ret.reshape(shape),
        "mean": mean.reshape(shape),
        "defect": np.where(alive, defect, np.inf).reshape(shape),
        "alive": alive.reshape(shape),
    }


def _orbit_triple(b, u0):
    """Roots of the orbit through (u0, 0), vectorized.

    2(V(u0) - V(u)) = (u0 - u) q(u) with q quadratic; an oscillation
    exists when q has real roots bracketing the right well.  Returns
    (e1, e2, e3, ok).
    """
    b = np.asarray(b, float)
    u0 = np.asarray(u0, float)
    qa = 2.0 / 3.0
    qb = 2.0 / 3.0 * u0 + 4.0
    qc = 2.0 / 3.0 * u0 ** 2 + 4.0 * u0 - 2.0 * b
    disc = qb ** 2 - 4 * qa * qc
    ok = disc > 0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    rp = (-qb + sq) / (2 * qa)
    rm = (-qb - sq) / (2 * qa)
    vp = u0 ** 2 + 4 * u0 - b          # V'(u0)
    e1 = np.where(vp > 0, u0, rp)
    e2 = np.where(vp > 0, rp, u0)
    e3 = rm
    ok = ok & (e1 > e2) & (e2 > e3) & np.isfinite(e1 + e2 + e3)
    return e1, e2, e3, ok


def _orbit_period_mean(b, u0, n=200):
    """(period, orbit mean, ok) for the orbit through (u0, 0)."""
    e1, e2, e3, ok = _orbit_triple(b, u0)
    e1 = np.atleast_1d(e1)
    e2 = np.atleast_1d(e2)
    e3 = np.atleast_1d(e3)
    okv = np.atleast_1d(ok)
    t, w = gauss_chebyshev(n)
    mid = 0.5 * (e1 + e2)
    half = 0.5 * (e1 - e2)
    u = mid[..., None] + half[..., None] * t
    safe = np.where(okv[..., None], np.maximum(u - e3[..., None], 1e-300), 1.0)
    g = w / np.sqrt(safe)
    big_t = g.sum(axis=-1)
    big_i = (g * u).sum(axis=-1)
    period = np.sqrt(6.0) * big_t
    mean = np.where(big_t > 0, big_i / np.maximum(big_t, 1e-300), np.inf)
    if np.ndim(b) == 0 and np.ndim(u0) == 0:
        return float(period[0]), float(mean[0]), bool(okv[0])
    return period, mean, okv


def classification_scan(b_values, u0_values, m_max=16, n_quad=200,
                        polish_tol=1e-11):
    """Locate every periodic zero-mean orbit in the box and classify it.

    Uses the orbit quadrature (period and mean as smooth functions of
    (b, u0)) to find candidate zeros of (period - 2pi/m, mean) for each
    integer m, polishes them with a least-squares root find, and labels
    each polished solution against :func:`mode_catalog`.  None of this
    touches the elliptic closed forms, so agreement with the catalog is an
    independent confirmation of the classification.
    """
    b = np.asarray(b_values, float)
    u0 = np.asarray(u0_values, float)
    bb, uu = np.meshgrid(b, u0, indexing="ij")
    period, mean, ok = _orbit_period_mean(bb.ravel(), uu.ravel(), n=n_quad)
    period = period.reshape(bb.shape)
    mean = mean.reshape(bb.shape)
    ok = ok.reshape(bb.shape)

    candidates = []
    for m in range(1, m_max + 1):
        target = TWO_PI / m
        d = np.where(ok, np.hypot(period - target, mean), np.inf)
        # strict local minima over the 4-neighborhood
        interior = d[1:-1, 1:-1]
        neigh = np.minimum.reduce([d[:-2, 1:-1], d[2:, 1:-1],
                                   d[1:-1, :-2], d[1:-1, 2:]])
        cap = max(TWO_PI / m - TWO_PI / (m + 1), 0.5)
        idx = np.argwhere((interior < neigh) & np.isfinite(interior)
                          & (interior < cap))
        for i, j in idx:
            candidates.append((m, bb[i + 1, j + 1], uu[i + 1, j + 1]))

    solutions = []
    seen = []
    for m, b0, v0 in candidates:
        def res(z, m=m):
            p, mu, okz = _orbit_period_mean(z[0], z[1], n=n_quad)
            if not okz:
                return np.array([1e3, 1e3])
            return np.array([p - TWO_PI / m, mu])

        try:
            sol = least_squares(res, np.array([b0, v0]), xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, method="lm")
        except Exception:
            continue
        defect = float(np.abs(sol.fun).max())
        if defect > polish_tol:
            continue
        zb, zu = float(sol.x[0]), float(sol.x[1])
        if any(abs(zb - s[0]) < 1e-6 * max(1, abs(zb))
               and abs(zu - s[1]) < 1e-6 * max(1, abs(zu)) for s in seen):
            continue
        seen.append((zb, zu))
        solutions.append({"m": m, "b": zb, "u0": zu, "defect": defect})

    # polishing may walk a candidate to a true solution beyond the sweep
    # box, so match against a catalog with generous margins
    span = u0.max() - u0.min()
    catalog = mode_catalog(10 * b.max() + 100, u0.min() - 2 * span,
                           u0.max() + 2 * span)
    for s in solutions:
        best, dist = None, np.inf
        for entry in catalog:
            dd = math.hypot((s["b"] - entry["b"]) / max(1, abs(entry["b"])),
                            (s["u0"] - entry["u0"]) / max(1, abs(entry["u0"])))
            if dd < dist:
                best, dist = entry, dd
        s["match"] = best["label"] if dist < 1e-5 else None
        s["match_distance"] = dist

    in_box = [e for e in catalog
              if b.min() <= e["b"] <= b.max()
              and u0.min() <= e["u0"] <= u0.max()]
    found_labels = {s["match"] for s in solutions if s["match"]}
    return {
        "solutions": solutions,
        "catalog_in_box": in_box,
        "all_matched": all(s["match"] is not None for s in solutions),
        "catalog_recovered": all(e["label"] in found_labels or e["k"] == 0
                                 for e in in_box),
        "period": period, "mean": mean, "ok": ok,
    }
