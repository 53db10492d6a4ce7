"""Command-line entry point: ``holobasis <command> ...``.

Exit codes: 0 when every check passes, 1 when a check fails (outputs are
still written), 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from holobasis import acceptance, bases, geometry, sequences, supnorm
from holobasis.errors import DomainError
from holobasis.expsum import VARIANTS, fit_loglog, scaling_fit
from holobasis.io import load_basis, save_basis, write_csv


def _int_list(text: str) -> list[int]:
    """'7,15,31' or a doubling range '16..1024'."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError
            out = [lo]
            while out[-1] * 2 <= hi:
                out.append(out[-1] * 2)
            return out
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b,c' or 'lo..hi', got {text!r}") from None


def _scan_kwargs(args) -> dict:
    return dict(grid=args.grid, refine=args.refine, oversample=args.oversample, top=args.top,
                screen_grid=args.screen_grid, screen_oversample=args.screen_oversample)


def _point_fields(est) -> list:
    p = est.point
    return [p.t1, p.t2, p.theta1, p.theta2, p.theta3]


def cmd_build(args) -> int:
    B = bases.build(args.block, args.degree, args.dim)
    save_basis(B, args.out)
    print(f"wrote {len(B)} vectors of {B.rows.shape[1]} coefficients to {args.out}")
    return 0


def cmd_gram(args) -> int:
    dev = load_basis(args.inp).gram_deviation()
    ok = dev <= args.tol
    print(f"{'PASS' if ok else 'FAIL'} gram deviation {dev:.3e} (tol {args.tol:g})")
    return 0 if ok else 1


def cmd_supnorm(args) -> int:
    B = load_basis(args.inp)
    res = supnorm.scan_basis(B, args.grid, args.refine, args.oversample)
    rows = [[i, e.lower_bound, e.heuristic_upper, *_point_fields(e)] for i, e in enumerate(res.estimates)]
    if args.out:
        write_csv(args.out, ["index", "lower_bound", "heuristic_upper", "t1", "t2", "theta1", "theta2", "theta3"],
                  rows)
    print(f"max sup norm {res.max:.6f} at row {res.argmax}; mean {res.mean:.6f}")
    return 0


def cmd_scan(args) -> int:
    rows = []
    for N in args.degrees:
        B = bases.build(args.block, N, 3)
        res = supnorm.scan_basis(B, **_scan_kwargs(args))
        e = res.estimates[res.argmax]
        rows.append([N, geometry.dimension(N), res.max, e.heuristic_upper, res.mean, res.argmax])
        print(f"N={N:4d}  max {res.max:.6f}  mean {res.mean:.6f}  row {res.argmax}", flush=True)
        del B
    if args.out:
        write_csv(args.out, ["N", "D", "max_lower_bound", "heuristic_upper", "mean_lower_bound", "argmax"], rows)
    if len(args.degrees) >= 2:
        slope, _ = fit_loglog([r[0] for r in rows], [r[2] for r in rows])
        print(f"log-log slope {slope:.4f}")
    return 0


def cmd_rs(args) -> int:
    worst, where = 0.0, None
    for k in range(args.max_log2 + 1):
        for shift in range(4):
            a, b = shift << k, (shift + 1) << k
            r = sequences.flatness_ratio(a, b)
            if r > worst:
                worst, where = r, (a, b)
    ok = worst <= args.max
    print(f"{'PASS' if ok else 'FAIL'} worst flatness ratio {worst:.6f} on [{where[0]}, {where[1]}) "
          f"(bound {args.max:g})")
    return 0 if ok else 1


def cmd_dioph(args) -> int:
    v, x = sequences.diophantine_min(args.limit)
    print(f"min x*||x sqrt2|| over 1..{args.limit} = {v:.9f} at x = {x}")
    return 0


def cmd_expsum(args) -> int:
    fit = scaling_fit(args.sizes, args.trials, args.seed, args.variant, N=args.N)
    if args.out:
        write_csv(args.out, ["M", "max_abs_sum", "ratio_to_M"],
                  [[M, v, v / M] for M, v in zip(fit.sizes, fit.maxima)])
    ok = fit.exponent <= args.max_slope
    print(f"{'PASS' if ok else 'FAIL'} {args.variant}: slope {fit.exponent:.4f} constant {fit.constant:.4f} "
          f"(bound {args.max_slope:g})")
    return 0 if ok else 1


def cmd_localize(args) -> int:
    pts = acceptance.localization_points(args.seed, args.samples)
    masses = np.array([supnorm.localization(z, args.degree, args.inflation) for z in pts])
    ok = masses.max() <= args.max
    print(f"{'PASS' if ok else 'FAIL'} N={args.degree} A={args.inflation:g}: worst mass outside tile "
          f"{masses.max():.3e}, median {np.median(masses):.3e} (bound {args.max:g})")
    return 0 if ok else 1


def cmd_report(args) -> int:
    rows = acceptance.run_all(args.seed, only=set(args.only) if args.only else None,
                               echo=lambda s: print(s, flush=True))
    doc = {"seed": args.seed, "passed": all(r.passed for r in rows),
           "checks": [r.to_dict() for r in rows]}
    Path(args.out).write_text(json.dumps(doc, indent=1, default=str) + "\n")
    print(f"{sum(r.passed for r in rows)}/{len(rows)} checks passed; report written to {args.out}")
    return 0 if doc["passed"] else 1


def _add_scan_opts(p, grid=acceptance.SCAN["grid"]):
    p.add_argument("--grid", type=int, default=grid)
    p.add_argument("--refine", type=int, default=acceptance.SCAN["refine"])
    p.add_argument("--oversample", type=int, default=acceptance.SCAN["oversample"])


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holobasis", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a basis and write it as JSON")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--block", choices=("phi2", "psi", "eta", "assembled", "monomial"), default="assembled")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("gram", help="check orthonormality of a basis file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=cmd_gram)

    p = sub.add_parser("supnorm", help="sup-norm estimates for every vector of a basis file")
    p.add_argument("--in", dest="inp", required=True)
    _add_scan_opts(p, grid=64)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_supnorm)

    p = sub.add_parser("scan", help="max sup norm of a construction across degrees")
    p.add_argument("--degrees", type=_int_list, default=[7, 15, 31, 63, 127])
    p.add_argument("--block", choices=("psi", "eta", "assembled", "monomial"), default="assembled")
    _add_scan_opts(p)
    p.add_argument("--top", type=int, default=acceptance.SCAN["top"],
                   help="rows refined fully after screening (0 = all)")
    p.add_argument("--screen-grid", type=int, default=acceptance.SCAN["screen_grid"])
    p.add_argument("--screen-oversample", type=int, default=acceptance.SCAN["screen_oversample"])
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("rs", help="Rudin-Shapiro flatness over dyadic intervals")
    p.add_argument("--max-log2", type=int, default=14)
    p.add_argument("--max", type=float, default=acceptance.FLAT_MAX)
    p.set_defaults(fn=cmd_rs)

    p = sub.add_parser("dioph", help="min of x*||x sqrt 2|| by brute force")
    p.add_argument("--limit", type=int, default=10**6)
    p.set_defaults(fn=cmd_dioph)

    p = sub.add_parser("expsum", help="scaling of mollified quadratic Weyl sums")
    p.add_argument("--variant", choices=VARIANTS, default="plain")
    p.add_argument("--sizes", type=_int_list, default=list(acceptance.EXPSUM_SIZES))
    p.add_argument("--trials", type=int, default=acceptance.EXPSUM_TRIALS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--N", type=int, default=10**6)
    p.add_argument("--max-slope", type=float, default=acceptance.EXPSUM_SLOPE_MAX)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_expsum)

    p = sub.add_parser("localize", help="mass of the frame outside tiles at random points")
    p.add_argument("--degree", type=int, default=acceptance.LOCAL_DEGREE)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--inflation", type=float, default=8.0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max", type=float, default=acceptance.LOCAL_MAX)
    p.set_defaults(fn=cmd_localize)

    p = sub.add_parser("report", help="run the full acceptance suite and write a JSON report")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--only", nargs="*", choices=list(acceptance.CHECKS), help="criterion numbers to run")
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "top", None) == 0:
        args.top = None
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
