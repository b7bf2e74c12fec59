"""Reduced equations on the sphere, the Newton solver, Bernoulli machinery."""

import numpy as np
import pytest

from homoflow import landau, oracle, sphere
from homoflow.numerics import observed_order, richardson_limit


def test_profile_validation():
    th = sphere.theta_gauss_grid(16)
    z = np.zeros_like(th)
    with pytest.raises(ValueError):
        sphere.SphereProfile(2, th, z, z, z)
    with pytest.raises(ValueError):
        sphere.SphereProfile(3, np.linspace(0.0, np.pi, 16), z, z, z)
    with pytest.raises(ValueError):
        sphere.SphereProfile(3, th[::-1], z, z, z)
    with pytest.raises(ValueError):
        sphere.SphereProfile(3, th, z[:-1], z, z)


def test_zero_profile_residual():
    for n in (3, 4, 5):
        rep = sphere.residual_axisym(sphere.zero_profile(n))
        assert rep.max_norm() == 0.0


def test_landau_profile_residual_all_paths():
    prof = sphere.landau_profile(1.0, 120)
    rep_a = sphere.residual_axisym(prof, differentiation="analytic")
    rep_s = sphere.residual_axisym(prof, differentiation="spectral")
    assert rep_a.max_norm() < 1e-10
    assert rep_s.max_norm() < 1e-9
    with pytest.raises(ValueError):
        sphere.residual_axisym(prof, differentiation="nope")


def test_random_profile_violates_continuity():
    rep = sphere.residual_axisym(sphere.random_profile(3, seed=1,
                                                       amplitude=0.5))
    assert rep.eq3_norm > 0.1


def test_fd_path_converges_at_stencil_order():
    # closed-form samples on uniform grids, derivatives from the moving
    # 7-point stencils: the residual must fall at high order under grid
    # halving (the one-sided second-derivative closures are order 5)
    norms = []
    sizes = (60, 120, 240, 480)
    for m in sizes:
        th = np.linspace(0.4, np.pi - 0.4, m)
        d = landau.state_derivs(th, 1.0)
        prof = sphere.SphereProfile(3, th, d["g"], d["f"], d["p"])
        rep = sphere.residual_axisym(prof, differentiation="fd")
        norms.append(rep.max_norm())
    h = 1.0 / np.asarray(sizes)
    slope = observed_order(h, norms)
    assert slope > 4.0
    assert norms[-1] < 1e-5


def test_fd_path_warns_on_coarse_grid():
    th = np.linspace(0.3, np.pi - 0.3, 8)
    z = np.zeros_like(th)
    rep = sphere.residual_axisym(sphere.SphereProfile(3, th, z, z, z),
                                 differentiation="fd")
    assert rep.warning is not None


def test_newton_reconverges_to_jet_from_perturbation():
    base = sphere.landau_profile(1.0, n_points=64)
    scale = float(np.abs(base.g).max())
    pert = sphere.random_profile(3, n_points=64, amplitude=0.01 * scale,
                                 seed=5)
    init = base.copy_with(g=base.g + pert.g, f=base.f + pert.f,
                          p=base.p + pert.p)
    res = sphere.newton_solve(3, init)
    assert res.converged
    assert max(res.residual_norms.values()) < 1e-10
    m = sphere.match_landau(res.profile)
    assert not m.degenerate
    assert m.max_error < 1e-8
    assert abs(m.kappa - 1.0) < 0.05


@pytest.mark.parametrize("n", [4, 5])
def test_newton_collapses_to_zero_in_high_dimensions(n):
    for seed in (0, 3, 11):
        init = sphere.random_profile(n, n_points=64, amplitude=0.1,
                                     seed=seed)
        res = sphere.newton_solve(n, init)
        assert res.converged
        assert sphere.profile_norm(res.profile) < 1e-8


def test_newton_reports_divergence():
    init = sphere.random_profile(4, n_points=32, amplitude=80.0, seed=2)
    res = sphere.newton_solve(4, init, max_iter=2)
    assert not res.converged
    assert np.isfinite(res.condition)


def test_newton_rejects_unsupported_dimension():
    with pytest.raises(ValueError):
        sphere.newton_solve(6, sphere.zero_profile(6))


def test_match_landau_exact_and_degenerate():
    m = sphere.match_landau(sphere.landau_profile(2.0, 64))
    assert m.kappa == pytest.approx(2.0, abs=1e-10)
    assert m.max_error < 1e-12
    z = sphere.match_landau(sphere.zero_profile(3))
    assert z.degenerate
    # mirror jet (axis flipped) is recognized with axis_sign = -1
    base = sphere.landau_profile(1.5, 64)
    flipped = sphere.SphereProfile(3, base.thetas, -base.g[::-1],
                                   base.f[::-1], base.p[::-1])
    m = sphere.match_landau(flipped)
    assert m.axis_sign == -1
    assert m.kappa == pytest.approx(1.5, abs=1e-9)
    # a non-jet profile reports a large error instead of raising
    bad = sphere.random_profile(3, seed=9, amplitude=1.0)
    m = sphere.match_landau(bad)
    assert m.max_error > 1e-2


def test_bernoulli_residual_landau():
    prof = sphere.landau_profile(1.0, 80)
    res = sphere.bernoulli_residual(prof, field=oracle.landau_field(1.0))
    assert res < 1e-6
    assert sphere.bernoulli_residual(sphere.zero_profile(3)) == 0.0
    bad = sphere.random_profile(3, seed=3, amplitude=0.5)
    assert sphere.bernoulli_residual(bad) > 1e-2


def test_bernoulli_profile_contents():
    prof = sphere.landau_profile(1.0, 40)
    bp = sphere.bernoulli_profile(prof, field=oracle.landau_field(1.0))
    assert bp.H.shape == prof.thetas.shape
    assert np.all(bp.omega_sq >= 0)


def test_positivity_functional():
    with pytest.raises(ValueError):
        sphere.positivity_functional(sphere.zero_profile(3))
    z5 = sphere.zero_profile(5)
    assert sphere.positivity_functional(z5) == 0.0
    neg = z5.copy_with(p=np.full_like(z5.p, -1.0))
    assert sphere.positivity_functional(neg) == 0.0
    for seed in range(6):
        prof = sphere.random_profile(5, seed=seed, amplitude=0.3)
        val = sphere.positivity_functional(prof)
        assert val >= 0.0
        h_max = float((0.5 * (prof.g ** 2 + prof.f ** 2) + prof.p).max())
        if h_max > 1e-12:
            assert val > 0.0
        else:
            assert val == 0.0
    # n = 4 reduces to the integral of |omega|^2
    z4 = sphere.zero_profile(4)
    om = np.ones_like(z4.thetas)
    val = sphere.positivity_functional(z4, omega_sq=om)
    area_s3 = 2 * np.pi ** 2
    assert val == pytest.approx(area_s3, rel=1e-8)


def test_converged_jet_passes_cartesian_oracle():
    base = sphere.landau_profile(1.0, n_points=64)
    pert = sphere.random_profile(3, n_points=64, amplitude=0.02, seed=8)
    init = base.copy_with(g=base.g + pert.g, f=base.f + pert.f,
                          p=base.p + pert.p)
    res = sphere.newton_solve(3, init)
    fld = sphere.extension_field(res.profile)
    pts = oracle.sample_shell_points(3, 20)
    rec = oracle.convergence_study(fld, pts)
    assert abs(rec.observed_order - 2.0) <= 0.3
    assert rec.extrapolated_norm < 1e-7


def test_cross_derivation_single_case():
    # intrinsic residuals match the Cartesian projections on a random
    # non-solution, confirming the tangential/radial/divergence mapping
    hs = oracle.DEFAULT_H_SCHEDULE
    prof = sphere.random_profile(4, seed=12, amplitude=0.4)
    fld = sphere.extension_field(prof)
    mu = np.array([-0.6, -0.2, 0.1, 0.5, 0.8])
    th = np.arccos(mu)
    pts = np.zeros((5, 4))
    pts[:, 0] = np.sin(th)
    pts[:, -1] = np.cos(th)
    eq1, eq2, eq3 = sphere.residual_pointwise(prof, thetas=th)
    moms, divs = [], []
    for h in hs:
        mom, div = oracle.ns_residual(fld, pts, h)
        moms.append(mom)
        divs.append(div)
    mom0 = richardson_limit(hs, moms)
    div0 = richardson_limit(hs, divs)
    axis = np.array([0.0, 0.0, 0.0, 1.0])
    e_th = (mu[:, None] * pts - axis[None, :]) / np.sin(th)[:, None]
    assert np.abs(np.sum(mom0 * e_th, axis=1) - eq1).max() < 1e-8
    assert np.abs(np.sum(mom0 * pts, axis=1) - (eq2 + 2 * eq3)).max() < 1e-8
    assert np.abs(div0 - eq3).max() < 1e-8
