"""The axisymmetric (-1)-homogeneous jets in three dimensions.

On the unit sphere with colatitude theta measured from the symmetry axis,
the whole family is generated by the conformal potential

    phi(theta) = -2 log(cosh kappa - sinh kappa cos theta),   kappa > 0,

through

    v_theta = dphi/dtheta = -2 sin theta / (coth kappa - cos theta),
    f       = 2 e^phi - 2,
    p       = f - v_theta^2 / 2,

and extends to R^3 \\ {0} by u(x) = (v + f e_r)/r, p(x) = p(theta)/r^2.
The potential can also be produced with no closed form at all: push the
sphere through the stereographic chart, dilate the plane by lambda =
exp(-kappa), pull back, and measure the conformal stretch; see
``potential_from_dilation``.

The extension solves the steady Navier-Stokes equations away from the
origin but carries a point momentum source there; ``net_force`` measures
it as a momentum-flux integral over a sphere and is radius independent.
"""

from dataclasses import dataclass, field

import numpy as np

from .numerics import gauss_legendre

__all__ = [
    "LandauParams", "SphereState", "potential", "sphere_state",
    "state_derivs", "velocity_pressure", "potential_from_dilation",
    "net_force", "axis_force_moment", "jet_parameters",
]

_Z_AXIS = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class LandauParams:
    """One member of the jet family: strength kappa > 0 and a unit axis."""

    kappa: float
    axis: tuple = _Z_AXIS

    def __post_init__(self):
        if not (np.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError("kappa must be positive and finite")
        a = np.asarray(self.axis, float)
        if a.shape != (3,):
            raise ValueError("axis must be a 3-vector")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > 1e-8:
            raise ValueError("axis must be a unit vector")
        object.__setattr__(self, "axis", tuple(a / norm))

    @property
    def axis_vec(self):
        return np.asarray(self.axis, float)


@dataclass(frozen=True)
class SphereState:
    """Velocity/pressure data at one colatitude on the unit sphere."""

    v_theta: float
    f: float
    p: float
    phi: float


def potential(theta, kappa):
    """phi(theta) = -2 log(cosh kappa - sinh kappa cos theta)."""
    th = np.asarray(theta, float)
    return -2.0 * np.log(np.cosh(kappa) - np.sinh(kappa) * np.cos(th))


def sphere_state(theta, params):
    """Closed-form (v_theta, f, p, phi) at colatitude theta.

    Arrays in, arrays out (as a SphereState of arrays).
    """
    kappa = params.kappa if isinstance(params, LandauParams) else float(params)
    th = np.asarray(theta, float)
    d = np.cosh(kappa) - np.sinh(kappa) * np.cos(th)
    phi = -2.0 * np.log(d)
    v = -2.0 * np.sin(th) / (1.0 / np.tanh(kappa) - np.cos(th))
    f = 2.0 / d ** 2 - 2.0
    p = f - 0.5 * v ** 2
    if np.ndim(theta) == 0:
        return SphereState(float(v), float(f), float(p), float(phi))
    return SphereState(v, f, p, phi)


def state_derivs(theta, kappa):
    """Analytic theta-derivatives of the profile, for residual checks.

    Returns a dict with g, g', g'', f, f', f'', p, p' where g = v_theta.
    """
    th = np.asarray(theta, float)
    ch, sh = np.cosh(kappa), np.sinh(kappa)
    a = ch / sh                      # coth kappa
    s, c = np.sin(th), np.cos(th)
    den = a - c
    g = -2.0 * s / den
    g1 = -2.0 * (a * c - 1.0) / den ** 2
    g2 = -2.0 * s * (2.0 - a * a - a * c) / den ** 3
    d = ch - sh * c
    f = 2.0 / d ** 2 - 2.0
    f1 = -4.0 * sh * s / d ** 3
    f2 = -4.0 * sh * (c * d - 3.0 * sh * s ** 2) / d ** 4
    p = f - 0.5 * g ** 2
    p1 = f1 - g * g1
    return {"g": g, "g1": g1, "g2": g2, "f": f, "f1": f1, "f2": f2,
            "p": p, "p1": p1}


def velocity_pressure(x, params):
    """(u, p) of the Cartesian extension at points x (shape (..., 3)).

    Implemented covariantly: with mu = axis . x/|x|, the tangent part is
    G(mu) (mu x_hat - axis) with G(mu) = -2/(coth kappa - mu), which is the
    rotation of the axis-frame closed form to an arbitrary axis and stays
    smooth at the poles.
    """
    x = np.asarray(x, float)
    squeeze = x.ndim == 1
    pts = np.atleast_2d(x)
    r = np.linalg.norm(pts, axis=1)
    if np.any(r == 0):
        raise ValueError("the field is singular at the origin")
    a = params.axis_vec
    xhat = pts / r[:, None]
    mu = xhat @ a
    kappa = params.kappa
    coth = 1.0 / np.tanh(kappa)
    g_big = -2.0 / (coth - mu)
    d = np.cosh(kappa) - np.sinh(kappa) * mu
    f = 2.0 / d ** 2 - 2.0
    tang = g_big[:, None] * (mu[:, None] * xhat - a[None, :])
    u = (tang + f[:, None] * xhat) / r[:, None]
    v_sq = g_big ** 2 * (1.0 - mu ** 2)
    p = (f - 0.5 * v_sq) / r ** 2
    if squeeze:
        return u[0], float(p[0])
    return u, p


def potential_from_dilation(theta, lam):
    """Conformal potential measured numerically through the plane chart.

    Project the point onto the complex plane (z = (x1 + i x2)/(1 - x3)),
    dilate z -> lam z, and compute log of the squared metric stretch from
    the chart factors sigma(z) = 2/(1 + |z|^2).  No hyperbolic closed form
    is used, so this provides an independent route to ``potential`` with
    kappa = -log(lam).
    """
    if not (np.isfinite(lam) and lam > 0):
        raise ValueError("the dilation factor must be positive")
    th = np.asarray(theta, float)
    scalar = np.ndim(theta) == 0
    th = np.atleast_1d(th)
    x3 = np.cos(th)
    s = np.sin(th)
    out = np.empty_like(th)
    interior = np.abs(1.0 - x3) > 1e-12
    zsq = np.empty_like(th)
    zsq[interior] = (s[interior] / (1.0 - x3[interior])) ** 2
    # stretch = |lam| * (1 + |z|^2) / (1 + |lam z|^2)
    stretch = np.empty_like(th)
    stretch[interior] = lam * (1.0 + zsq[interior]) / (1.0 + lam ** 2 * zsq[interior])
    # chart limit at the projection pole: z -> infinity, stretch -> 1/lam
    stretch[~interior] = 1.0 / lam
    out = 2.0 * np.log(stretch)
    return float(out[0]) if scalar else out


def _momentum_flux_quad(params, radius, n_polar, n_azimuth):
    """Surface integral of (-du/dr + u u_r + p n) over |x| = radius.

    World-frame product quadrature (Gauss in the polar cosine, trapezoid in
    azimuth), deliberately not aligned with params.axis so that the
    axial direction of the result is an outcome, not an input.  For the
    (-1)-homogeneous field du/dr = -u/r pointwise.
    """
    mu, w_mu = gauss_legendre(n_polar)
    psi = np.arange(n_azimuth) * (2 * np.pi / n_azimuth)
    w_psi = 2 * np.pi / n_azimuth
    mm, pp = np.meshgrid(mu, psi, indexing="ij")
    s = np.sqrt(1.0 - mm ** 2)
    nx = np.stack([s * np.cos(pp), s * np.sin(pp), mm], axis=-1)
    pts = radius * nx.reshape(-1, 3)
    u, p = velocity_pressure(pts, params)
    n_out = nx.reshape(-1, 3)
    u_r = np.sum(u * n_out, axis=1)
    # -du/dr = u/r by homogeneity
    integrand = u / radius + u * u_r[:, None] + p[:, None] * n_out
    w = (w_mu[:, None] * np.full((1, n_azimuth), w_psi)).reshape(-1)
    area_el = radius ** 2
    return (integrand * w[:, None]).sum(axis=0) * area_el


def net_force(params, radius=1.0, n_polar=200, n_azimuth=256):
    """Momentum source concentrated at the origin, as a 3-vector.

    Radius independent by homogeneity; parallel to the symmetry axis up to
    quadrature error.  Raises if the quadrature has not converged.
    """
    b1 = _momentum_flux_quad(params, radius, n_polar, n_azimuth)
    b2 = _momentum_flux_quad(params, radius, n_polar + 40, n_azimuth + 64)
    if np.linalg.norm(b1 - b2) > 1e-9 * max(1.0, np.linalg.norm(b2)):
        raise ArithmeticError(
            f"momentum-flux quadrature did not converge: "
            f"|delta| = {np.linalg.norm(b1 - b2):.3e} at sizes "
            f"{n_polar}x{n_azimuth} vs {n_polar + 40}x{n_azimuth + 64}")
    return b2


def axis_force_moment(kappa, n_polar=200):
    """Axial component of the force by the reduced 1D quadrature.

    With the axis at the pole the azimuthal integral is 2 pi and only the
    axial component survives:

        b_z = 2 pi int_0^pi [-(1+f) v sin + (f + f^2 + p) cos] sin dtheta.

    Cross-check for ``net_force``.
    """
    mu, w = gauss_legendre(n_polar)
    th = np.arccos(mu)
    st = sphere_state(th, LandauParams(kappa))
    s = np.sin(th)
    integrand = -(1.0 + st.f) * st.v_theta * s + (st.f + st.f ** 2 + st.p) * mu
    return 2 * np.pi * float(np.sum(w * integrand))


def jet_parameters(kappa):
    """Equivalent textbook parameters: A = coth kappa and c = A - 1."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    a = 1.0 / np.tanh(kappa)
    return a, a - 1.0
