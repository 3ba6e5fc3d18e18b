"""Command-line front end.

Subcommands: covering, koenigs, flow, spiral-check, extend, sharp-bound,
gen-extend.  Complex values on the command line are "re,im" pairs (a bare
real is accepted); complex values in JSON are [re, im] arrays.  Exit codes:
0 pass, 1 verified failure, 2 usage/input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__, covering, extensions, genext, report, semigroups, sharp_bound
from .families import UnivalentMap

FAMILY_SHORTCUTS = ("identity", "koebe", "half_plane")


class UsageError(ValueError):
    pass


def _parse_complex(s):
    parts = str(s).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse complex value {s!r} (expected re,im)")


def _parse_floats(s):
    try:
        return [float(v) for v in str(s).split(",")]
    except ValueError:
        raise UsageError(f"cannot parse number list {s!r}")


def _parse_grid(s):
    parts = str(s).split(",")
    if len(parts) != 2:
        raise UsageError(f"grid must be NR,NT, got {s!r}")
    return int(parts[0]), int(parts[1])


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {path}: {e}")


def _load_map(arg):
    if arg in FAMILY_SHORTCUTS:
        return UnivalentMap.from_spec({"family": arg})
    spec = _load_json(arg)
    try:
        return UnivalentMap.from_spec(spec)
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad function spec {arg}: {e}")


def _load_generator(arg):
    spec = _load_json(arg)
    try:
        return semigroups.Generator.from_spec(spec)
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad generator spec {arg}: {e}")


def _load_poly(arg, m):
    if arg is None:
        return None
    spec = _load_json(arg)
    try:
        q = extensions.HomogeneousPolynomial.from_spec(spec)
    except (KeyError, ValueError) as e:
        raise UsageError(f"bad polynomial spec {arg}: {e}")
    if q.m != m:
        raise UsageError(f"polynomial has {q.m} variables, expected m={m}")
    return q


def _base_report(args, sub):
    echo = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    return {
        "schema": report.SCHEMA,
        "tool_version": __version__,
        "subcommand": sub,
        "inputs": {k: str(v) for k, v in sorted(echo.items())},
    }


def _finish(payload, out, t0, passed):
    payload["pass"] = bool(passed)
    payload["timing_s"] = time.time() - t0
    payload["determinism_hash"] = report.determinism_hash(payload)
    if out:
        report.write_report(out, payload)
    else:
        json.dump(payload, sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    return 0 if passed else 1


# -- subcommands ------------------------------------------------------------


def cmd_covering(args):
    t0 = time.time()
    h = _load_map(args.fn)
    grid = _parse_grid(args.grid)
    x0 = _parse_complex(args.x0)
    if args.beta is not None:
        rep = covering.verify_shifted_covering_bound(h, x0, args.alpha, _parse_complex(args.beta),
                                       grid=grid)
    else:
        rep = covering.verify_covering_bound(h, x0, args.alpha, grid=grid)
    if args.dump_region:
        spec = covering.OmegaSpec.build(h, x0, args.alpha)
        pts, inside = covering.omega_region_points(h, spec)
        with open(args.dump_region, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x_re", "x_im", "in_omega"])
            for p, i in zip(pts, inside):
                w.writerow([p.real, p.imag, int(i)])
    payload = _base_report(args, "covering")
    payload.update(rep.to_dict())
    return _finish(payload, args.out, t0, rep.passed)


def cmd_koenigs(args):
    t0 = time.time()
    gen = _load_generator(args.gen)
    h = semigroups.koenigs(gen)
    n = args.grid
    r = np.linspace(0.1, 0.9, max(n // 8, 2))
    th = 2.0 * np.pi * np.arange(8) / 8
    zs = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    hv = h.eval_array(zs)
    dv = h.deriv_array(zs)
    fv = gen.f(zs)
    resid = float(np.max(np.abs(dv * fv - gen.mu * hv)))
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["z_re", "z_im", "h_re", "h_im"])
            for z, v in zip(zs, hv):
                w.writerow([z.real, z.imag, v.real, v.imag])
    payload = _base_report(args, "koenigs")
    payload["linearization_residual"] = resid
    payload["n_samples"] = int(zs.size)
    return _finish(payload, args.out, t0, resid <= 1e-8)


def cmd_flow(args):
    t0 = time.time()
    gen = _load_generator(args.gen)
    res = semigroups.flow(gen, _parse_complex(args.z0), args.t)
    payload = _base_report(args, "flow")
    payload["endpoint"] = [res.endpoint.real, res.endpoint.imag]
    payload["steps"] = res.steps
    payload["local_error_estimate"] = res.local_error_estimate
    return _finish(payload, args.out, t0, True)


def cmd_spiral_check(args):
    t0 = time.time()
    payload = _base_report(args, "spiral-check")
    if args.gen:
        gen = _load_generator(args.gen)
        margin = semigroups.berkson_porta_margin(gen)
        payload["criterion"] = "berkson_porta"
    else:
        if not args.fn or args.mu is None:
            raise UsageError("spiral-check needs --fn with --mu, or --gen")
        h = _load_map(args.fn)
        margin = semigroups.spirallike_margin(h, _parse_complex(args.mu))
        payload["criterion"] = "spirallike_margin"
    payload["margin"] = margin
    return _finish(payload, args.out, t0, margin >= -1e-9)


def cmd_extend(args):
    t0 = time.time()
    h = _load_map(args.fn)
    space = extensions.BallSpace(r=args.r, m=args.m)
    q = _load_poly(args.Q, args.m) or extensions.HomogeneousPolynomial.zero(
        int(args.r), args.m)
    mu = _parse_complex(args.mu)
    lam = _parse_complex(args.lam)
    times = _parse_floats(args.times)
    rep = extensions.verify_invariance(
        h, mu, lam, space, q, times, n_samples=args.samples,
        mode=args.mode, seed=args.seed)
    payload = _base_report(args, "extend")
    payload.update(rep)
    payload["sup_norm_Q"] = extensions.sup_norm_Q(q, space, samples=20_000,
                                                  seed=args.seed)
    payload["bound"] = 0.25 * lam.real / abs(lam)
    return _finish(payload, args.out, t0, rep["pass"])


def cmd_sharp_bound(args):
    t0 = time.time()
    p = sharp_bound.SharpParams(lam=_parse_complex(args.lam), r=args.r)
    inf = sharp_bound.infimum_f(p, t_max=args.tmax)
    ineq = sharp_bound.verify_cor_inequality(p)
    t_tail = 50.0 / (p.a * p.r)
    tail = float(sharp_bound.f_sharp(p, t_tail))
    if args.dump_curve:
        ts = np.geomspace(1e-6, t_tail, 2000)
        vals = sharp_bound.f_sharp(p, ts)
        with open(args.dump_curve, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "f"])
            for t, v in zip(ts, vals):
                w.writerow([t, v])
    payload = _base_report(args, "sharp-bound")
    payload["infimum"] = inf
    payload["limit_zero"] = p.limit_zero
    payload["inequality_margin"] = ineq
    payload["f_at_tmax"] = tail
    ok = (inf >= p.limit_zero - 1e-9
          and abs(inf - p.limit_zero) <= 1e-3
          and (ineq["min_margin"] > 0 if p.b != 0 else abs(ineq["min_margin"]) < 1e-12)
          and abs(tail - 1.0) <= 1e-6)
    return _finish(payload, args.out, t0, ok)


def cmd_gen_extend(args):
    t0 = time.time()
    gen = _load_generator(args.gen)
    lam = _parse_complex(args.lam)
    space = extensions.BallSpace(r=args.r, m=args.m)
    q = _load_poly(args.Q, args.m) or extensions.HomogeneousPolynomial.zero(
        int(args.r), args.m)
    g = genext.ExtendedGenerator(base=gen, lam=lam, space=space, Q=q)
    h = semigroups.koenigs(gen)
    rng = np.random.default_rng(args.seed)
    xs, ys = extensions.sample_ball(space, args.samples, rng)
    xs *= 0.8  # keep quadrature-backed h well resolved
    pts = [extensions.BallPoint.of(x, y) for x, y in zip(xs, ys)]
    resid = genext.conjugation_residual(g, h, pts)
    dh_res = max(genext.dh_tilde_identity_residual(g, h, p) for p in pts[:50])
    exits = 0
    rows = []
    for p in pts[:args.flows]:
        traj = genext.flow_ball(g, p, args.T)
        exits += int(traj.exited)
        if args.dump_traj:
            for t, pt in traj.samples:
                rows.append([t, pt.x.real, pt.x.imag]
                            + [v for y in pt.y for v in (y.real, y.imag)])
    if args.dump_traj:
        with open(args.dump_traj, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x_re", "x_im"]
                       + [f"y{k}_{p}" for k in range(space.m) for p in ("re", "im")])
            w.writerows(rows)
    payload = _base_report(args, "gen-extend")
    payload["conjugation_residual"] = resid
    payload["dh_identity_residual"] = dh_res
    payload["ball_exits"] = exits
    payload["flows"] = min(args.flows, len(pts))
    ok = resid <= 1e-8 and dh_res <= 1e-9 and exits == 0
    return _finish(payload, args.out, t0, ok)


# -- parser -------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="spirallab",
        description="Numerical verification of disk covering bounds, Koenigs "
                    "functions and extension operators on the ball.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("covering", help="covered-disk radius vs predicted bound")
    c.add_argument("--fn", required=True, help="function spec JSON path or family name")
    c.add_argument("--x0", required=True, help="base point re,im")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--beta", help="contraction factor re,im (shifted-center check)")
    c.add_argument("--grid", default="400,400", help="NR,NT polar grid")
    c.add_argument("--out", help="report JSON path")
    c.add_argument("--dump-region", dest="dump_region",
                   help="CSV of (x_re,x_im,in_omega) samples")
    c.set_defaults(func=cmd_covering)

    k = sub.add_parser("koenigs", help="solve h' f = mu h and dump samples")
    k.add_argument("--gen", required=True, help="generator spec JSON path")
    k.add_argument("--grid", type=int, default=64)
    k.add_argument("--out", help="report JSON path")
    k.add_argument("--out-csv", dest="out_csv", help="CSV of h samples")
    k.set_defaults(func=cmd_koenigs)

    f = sub.add_parser("flow", help="integrate dz/dt = -f(z)")
    f.add_argument("--gen", required=True)
    f.add_argument("--z0", required=True, help="start point re,im")
    f.add_argument("--t", type=float, required=True)
    f.add_argument("--out")
    f.set_defaults(func=cmd_flow)

    s = sub.add_parser("spiral-check", help="spirallike / generator margin oracle")
    s.add_argument("--fn", help="function spec (with --mu)")
    s.add_argument("--mu", help="spiral multiplier re,im")
    s.add_argument("--gen", help="generator spec (Berkson-Porta margin)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_spiral_check)

    e = sub.add_parser("extend", help="ball extension invariance sweep")
    e.add_argument("--fn", required=True)
    e.add_argument("--r", type=float, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--Q", help="homogeneous polynomial JSON path")
    e.add_argument("--mu", required=True)
    e.add_argument("--lambda", dest="lam", required=True)
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--times", default="0.1,0.5,1,2")
    e.add_argument("--mode", choices=("muir", "gamma"), default="muir")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.set_defaults(func=cmd_extend)

    b = sub.add_parser("sharp-bound", help="tightness of the perturbation bound")
    b.add_argument("--lambda", dest="lam", required=True)
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--tmax", type=float)
    b.add_argument("--dump-curve", dest="dump_curve")
    b.add_argument("--out")
    b.set_defaults(func=cmd_sharp_bound)

    g = sub.add_parser("gen-extend", help="generator extension verification")
    g.add_argument("--gen", required=True)
    g.add_argument("--lambda", dest="lam", required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--Q")
    g.add_argument("--samples", type=int, default=200)
    g.add_argument("--flows", type=int, default=20)
    g.add_argument("--T", type=float, default=5.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dump-traj", dest="dump_traj")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_extend)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
