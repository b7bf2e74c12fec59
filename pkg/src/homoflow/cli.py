"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 numeric/convergence failure,
4 verification failure (a residual above tolerance).  Profiles and tables
are emitted as CSV (plot ready), structured results as JSON.  The
HOMOFLOW_SEED environment variable overrides the default sample seed.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import elliptic, hamel, landau, oracle, solutions, sphere

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4


def _seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("HOMOFLOW_SEED")
    return int(env) if env else oracle.DEFAULT_SEED


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _json_out(payload, path=None):
    text = json.dumps(payload, sort_keys=True, indent=1, default=float) + "\n"
    _emit(text, path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_elliptic_table(args):
    rows = elliptic.table(args.kappa_min, args.kappa_max, args.points)
    _emit(_csv(rows, ["kappa", "F", "E", "dF", "dE", "H"]), args.out)
    return EXIT_OK


def cmd_landau_eval(args):
    params = landau.LandauParams(args.kappa)
    state = landau.sphere_state(args.theta, params)
    payload = {"kappa": args.kappa, "theta": args.theta,
               "v_theta": state.v_theta, "f": state.f, "p": state.p,
               "phi": state.phi}
    if args.psi is not None:
        th, ps = args.theta, args.psi
        e_th = np.array([np.cos(th) * np.cos(ps), np.cos(th) * np.sin(ps),
                         -np.sin(th)])
        e_r = np.array([np.sin(th) * np.cos(ps), np.sin(th) * np.sin(ps),
                        np.cos(th)])
        u = state.v_theta * e_th + state.f * e_r
        payload["psi"] = ps
        payload["u"] = u.tolist()
    _json_out(payload)
    return EXIT_OK


def cmd_landau_profile(args):
    params = landau.LandauParams(args.kappa)
    th = np.linspace(0.0, np.pi, args.points + 2)[1:-1]
    st = landau.sphere_state(th, params)
    rows = np.column_stack([th, st.v_theta, st.f, st.p, st.phi])
    _emit(_csv(rows, ["theta", "v", "f", "p", "phi"]), args.out)
    return EXIT_OK


def cmd_landau_force(args):
    params = landau.LandauParams(args.kappa)
    try:
        b = landau.net_force(params)
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    a, c = landau.jet_parameters(args.kappa)
    _json_out({"kappa": args.kappa, "b": b.tolist(), "A": a, "c": c},
              args.out)
    return EXIT_OK


def cmd_hamel_solve(args):
    if args.k < 3:
        sol = hamel.roots_for_mode(args.k) if args.k >= 1 else None
        if sol is None:
            print(f"error: no zero-flux mode exists for k = {args.k} "
                  "(the period condition has no root)", file=sys.stderr)
        else:
            print(f"error: k = {args.k} admits only the trivial profile "
                  "(degenerate roots (0, 0, -6)); the linearized "
                  "cos(2 theta) mode does not deform", file=sys.stderr)
        return EXIT_NUMERIC
    sol = hamel.roots_for_mode(args.k)
    profile = hamel.integrate_profile(sol.roots, args.k, theta0=args.theta0,
                                      n_steps=args.points)
    payload = {
        "k": sol.k, "kappa": sol.kappa, "delta": sol.delta,
        "roots": [float(v) for v in sol.roots.as_tuple()],
        "b": profile.b_const, "E": profile.energy_E,
        "c_pressure": profile.c_pressure,
        "amplitude": profile.amplitude,
        "energy_drift": profile.energy_drift,
        "theta0": profile.theta0,
    }
    _json_out(payload, args.out)
    if args.csv:
        rows = np.column_stack([np.asarray(profile.thetas, float),
                                np.asarray(profile.f, float),
                                np.asarray(profile.p, float)])
        _emit(_csv(rows, ["theta", "f", "p"]), args.csv)
    return EXIT_OK


def cmd_hamel_sweep(args):
    limit = hamel.amplitude_limit()
    rows = []
    for k in range(3, args.kmax + 1):
        sol = hamel.roots_for_mode(k)
        amp = float(sol.roots.e1 - sol.roots.e2)
        rows.append([k, sol.kappa, amp, amp / k ** 2, limit,
                     amp / k ** 2 / limit])
    _emit(_csv(rows, ["k", "kappa", "amplitude", "amplitude_over_k2",
                      "large_k_limit", "ratio"]), args.out)
    return EXIT_OK


def cmd_hamel_green(args):
    x = np.array([args.x, args.y])
    vals = [hamel.stokes_green(args.i, args.j, k, x) for k in (1, 2)]
    _json_out({"i": args.i, "j": args.j, "x": args.x, "y": args.y,
               "G": vals})
    return EXIT_OK


def cmd_solve(args):
    if args.init_file:
        doc = solutions.load_solution(args.init_file)
        initial = solutions.profile_from_document(doc)
        if initial.n != args.n:
            print("error: --n disagrees with the init file", file=sys.stderr)
            return EXIT_USAGE
    else:
        initial = sphere.random_profile(args.n, n_points=args.grid,
                                        amplitude=args.amplitude,
                                        seed=_seed(args))
    result = sphere.newton_solve(args.n, initial)
    if not result.converged:
        print(f"error: Newton did not converge in {result.iterations} "
              f"iterations (last residual {result.history[-1]:.3e}, "
              f"condition estimate {result.condition:.3e})",
              file=sys.stderr)
        return EXIT_NUMERIC
    matched = None
    if args.n == 3:
        m = sphere.match_landau(result.profile)
        if not m.degenerate:
            matched = m.kappa
    _fields, extra = solutions.profile_document(
        result.profile, result.residual_norms, matched_kappa=matched,
        seed=_seed(args))
    solutions.write_solution(
        args.out, kind="profile", n=args.n,
        params={"grid": len(result.profile.thetas),
                "iterations": result.iterations},
        grid={"thetas": result.profile.thetas},
        fields={"g": result.profile.g, "f": result.profile.f,
                "p": result.profile.p},
        residual_summary=result.residual_norms,
        seed=_seed(args), extra=extra)
    print(f"converged in {result.iterations} iterations; "
          f"residuals {result.residual_norms}", file=sys.stderr)
    return EXIT_OK


def _field_for_verify(args):
    if args.field == "landau":
        kappa = args.kappa if args.kappa is not None else 1.0
        return oracle.landau_field(kappa), "ns"
    if args.field == "hamel":
        k = args.k if args.k is not None else 3
        sol = hamel.roots_for_mode(k)
        if sol is None or sol.trivial:
            raise ValueError(f"no nontrivial mode for k = {k}")
        profile = hamel.integrate_profile(sol.roots, k, n_steps=6000)
        return oracle.hamel_field(profile), "ns"
    if args.field == "green":
        return oracle.green_dipole_field(), "stokes"
    if args.field == "profile-file":
        if not args.profile:
            raise ValueError("--profile FILE is required for profile-file")
        doc = solutions.load_solution(args.profile)
        prof = solutions.profile_from_document(doc)
        return sphere.extension_field(prof), "ns"
    raise ValueError(f"unknown field {args.field!r}")


def cmd_verify(args):
    try:
        field, kind = _field_for_verify(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    points = oracle.sample_shell_points(field.n, args.points,
                                        seed=_seed(args))
    record = oracle.convergence_study(field, points, kind=kind)
    flux = oracle.divergence_flux(field)
    homog = oracle.homogeneity_defect(field, points)
    # a residual below the solver tolerance at every h has no order to fit
    at_floor = max(record.residual_norms) < 1e-10
    passed = ((at_floor or abs(record.observed_order - 2.0) <= 0.3)
              and record.extrapolated_norm < args.tol
              and homog < 1e-9)
    report = {
        "field": field.label, "kind": kind,
        "seed": _seed(args),
        "h": list(record.h_values),
        "norms": list(record.residual_norms),
        "order": record.observed_order,
        "extrapolated": record.extrapolated_norm,
        "flux": flux,
        "homogeneity_defect": homog,
        "tolerance": args.tol,
        "pass": bool(passed),
    }
    _json_out(report, args.report)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_suite(args):
    from . import acceptance
    results = acceptance.run_suite(verbose=not args.json)
    if args.json:
        payload = [{"criterion": r.name, "passed": r.passed,
                    "detail": r.detail, "seconds": round(r.elapsed, 2)}
                   for r in results]
        _json_out({"results": payload,
                   "all_passed": all(r.passed for r in results)})
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="homoflow",
        description="Construct, classify, and verify scale-invariant "
                    "steady Navier-Stokes flows.")
    sub = p.add_subparsers(dest="command", required=True)

    ell = sub.add_parser("elliptic", help="elliptic-integral tables")
    ell_sub = ell.add_subparsers(dest="subcommand", required=True)
    t = ell_sub.add_parser("table", help="CSV of F, E, dF, dE, H")
    t.add_argument("--kappa-min", type=float, required=True)
    t.add_argument("--kappa-max", type=float, required=True)
    t.add_argument("--points", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_elliptic_table)

    lnd = sub.add_parser("landau", help="the 3D jet family")
    lnd_sub = lnd.add_subparsers(dest="subcommand", required=True)
    e = lnd_sub.add_parser("eval", help="state at one colatitude")
    e.add_argument("--kappa", type=float, required=True)
    e.add_argument("--theta", type=float, required=True)
    e.add_argument("--psi", type=float)
    e.set_defaults(func=cmd_landau_eval)
    pr = lnd_sub.add_parser("profile", help="CSV profile over theta")
    pr.add_argument("--kappa", type=float, required=True)
    pr.add_argument("--points", type=int, default=200)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_landau_profile)
    fo = lnd_sub.add_parser("force", help="net momentum source")
    fo.add_argument("--kappa", type=float, required=True)
    fo.add_argument("--out")
    fo.set_defaults(func=cmd_landau_force)

    ham = sub.add_parser("hamel", help="2D zero-flux profiles")
    ham_sub = ham.add_subparsers(dest="subcommand", required=True)
    hs = ham_sub.add_parser("solve", help="construct one mode")
    hs.add_argument("--k", type=int, required=True)
    hs.add_argument("--points", type=int, default=20000)
    hs.add_argument("--theta0", type=float, default=0.0)
    hs.add_argument("--out")
    hs.add_argument("--csv")
    hs.set_defaults(func=cmd_hamel_solve)
    hw = ham_sub.add_parser("sweep", help="amplitude scaling table")
    hw.add_argument("--kmax", type=int, default=12)
    hw.add_argument("--out")
    hw.set_defaults(func=cmd_hamel_sweep)
    hg = ham_sub.add_parser("green", help="Stokes dipole kernel values")
    hg.add_argument("--i", type=int, required=True)
    hg.add_argument("--j", type=int, required=True)
    hg.add_argument("--x", type=float, required=True)
    hg.add_argument("--y", type=float, required=True)
    hg.set_defaults(func=cmd_hamel_green)

    so = sub.add_parser("solve", help="Newton solve on the sphere")
    so.add_argument("--n", type=int, required=True, choices=(3, 4, 5))
    so.add_argument("--grid", type=int, default=64)
    so.add_argument("--seed", type=int)
    so.add_argument("--amplitude", type=float, default=0.1)
    so.add_argument("--init-file")
    so.add_argument("--out", required=True)
    so.set_defaults(func=cmd_solve)

    ve = sub.add_parser("verify", help="finite-difference residual check")
    ve.add_argument("--field", required=True,
                    choices=("landau", "hamel", "green", "profile-file"))
    ve.add_argument("--kappa", type=float)
    ve.add_argument("--k", type=int)
    ve.add_argument("--profile")
    ve.add_argument("--points", type=int, default=50)
    ve.add_argument("--tol", type=float, default=1e-7)
    ve.add_argument("--seed", type=int)
    ve.add_argument("--report")
    ve.set_defaults(func=cmd_verify)

    su = sub.add_parser("suite", help="run the full acceptance matrix")
    su.add_argument("--json", action="store_true")
    su.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
