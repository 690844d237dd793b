"""Command-line front end: reproducible experiment runs with JSON/CSV reports.

Exit status is 0 when the run passes or explicitly refuses to assert (with
the violated precondition echoed), nonzero on failure or bad parameters.
Identical invocations (including --seed) produce byte-identical reports.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import envelope as envmod
from . import euler as elmod
from . import beurling as fftmod
from . import kernel, probe, radial, verify
from .report import ExperimentReport, VERDICT_FAIL, VERDICT_NOT_ASSERTED, VERDICT_PASS, emit_report, write_csv


def _parse_complex(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def _out_path(args, default_name: str) -> str:
    if args.out:
        return args.out
    base = os.environ.get("BURKBENCH_OUT_DIR", ".")
    return os.path.join(base, default_name)


def _emit(args, report: ExperimentReport, echo: dict) -> int:
    payload = report.to_dict()
    payload["config_echo"] = echo
    path = _out_path(args, f"{report.name}.json")
    emit_report(payload, path)
    print(f"{report.name}: {report.verdict}  (report: {path})")
    if report.verdict == VERDICT_NOT_ASSERTED:
        for reason in report.precondition_failures:
            print(f"  not asserted: {reason}")
        return 0
    return 0 if report.verdict == VERDICT_PASS else 1


def _echo(args, **extra) -> dict:
    # the report path itself stays out of the echo so equal configs written
    # to different locations remain byte-identical
    d = {k: v for k, v in vars(args).items() if k not in ("func", "out") and v is not None}
    d.update(extra)
    return d


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    e = kernel.Exponent(args.p) if args.p else None
    g = kernel.PlanarGradient(args.xi, args.zeta)
    tag = args.integrand
    if tag == "burkholder":
        val = kernel.eval_burkholder(e, g)
    elif tag == "burkholder_real":
        val = kernel.eval_burkholder_real_form(e, g)
    elif tag == "burkholder_m":
        val = kernel.eval_burkholder_m(e, args.M, g)
    elif tag == "beurling_m":
        val = kernel.eval_beurling_m(e, args.M, g)
    elif tag == "aubert":
        val = kernel.eval_aubert(args.M, g)
    elif tag == "envelope":
        val = kernel.eval_envelope_closed_form(e, g)
    elif tag == "distortion":
        val = kernel.distortion(g)
    else:
        raise SystemExit(f"unknown integrand {tag!r}")
    print(format(val, ".17g"))
    return 0


def cmd_verify(args) -> int:
    e = kernel.Exponent(args.p)
    tol = args.tol if args.tol is not None else verify.GAP_TOL
    if args.check == "bebu":
        rep = verify.verify_bebu(e, samples=args.samples, seed=args.seed, gap_tol=tol)
    elif args.check == "m-pointwise":
        rep = verify.verify_m_pointwise(e, args.M, samples=args.samples, seed=args.seed, gap_tol=tol)
    elif args.check == "aubert-pair":
        rep = verify.verify_aubert_pair(args.M, samples=args.samples, seed=args.seed, gap_tol=tol)
    elif args.check == "envelope-majorant":
        rep = verify.verify_envelope_majorant(e, grid_n=args.grid_n, gap_tol=tol)
    else:
        raise SystemExit(f"unknown check {args.check!r}")
    return _emit(args, rep, _echo(args))


def cmd_probe(args) -> int:
    e = kernel.Exponent(args.p)
    if args.integrand == "burkholder":
        E = kernel.burkholder(e)
    elif args.integrand == "burkholder_m":
        E = kernel.burkholder_m(e, args.M)
    elif args.integrand == "beurling_m":
        E = kernel.beurling_m(e, args.M)
    elif args.integrand == "aubert":
        E = kernel.aubert(args.M)
    else:
        raise SystemExit(f"unknown integrand {args.integrand!r}")
    res = probe.probe_rank_one_concavity(E)
    rep = ExperimentReport(
        name="probe_rank_one_concavity",
        parameters={"integrand": E.describe(), "p": args.p, "M": args.M},
        samples=res.n_triples,
        metrics=res.to_dict(),
        verdict=VERDICT_PASS,
    )
    rep.metrics["expected"] = args.expect
    if args.expect != "any":
        rep.verdict = VERDICT_PASS if res.verdict == args.expect else VERDICT_FAIL
    return _emit(args, rep, _echo(args))


def cmd_envelope(args) -> int:
    e = kernel.Exponent(args.p)
    E = kernel.beurling_m(e, e.burkholder_norm) if args.integrand == "beurling" else kernel.burkholder(e)
    grid, run = envmod.compute_envelope(E, e, nx=args.n, x_max=args.x_max, tol=args.tol, max_iter=args.max_iter)
    closed = kernel.envelope_closed_form(e)
    X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    ref = closed.moduli(X, Y)
    half = slice(0, (args.n - 1) // 2 + 1)
    sup_err = float(np.max(np.abs(grid.values - ref)[half, half])) if args.integrand == "beurling" else float("nan")
    rep = ExperimentReport(
        name="compute_envelope",
        parameters={"p": args.p, "n": args.n, "x_max": args.x_max, "tol": args.tol, "integrand": args.integrand},
        metrics={
            "iterations": run.iterations,
            "converged": run.converged,
            "homogeneity_lift": run.homogeneity_lift,
            "sup_error_inner_half_vs_closed_form": sup_err,
        },
        verdict=VERDICT_PASS if run.converged else VERDICT_FAIL,
    )
    if args.csv:
        grid.to_csv(args.csv)
        rep.artifacts.append(args.csv)
    return _emit(args, rep, _echo(args))


def cmd_radial(args) -> int:
    e = kernel.Exponent(args.p)
    if args.experiment == "energy":
        if args.profile_json:
            with open(args.profile_json, "r", encoding="utf-8") as fh:
                prof = radial.RadialProfile.from_json(fh.read())
        else:
            orientation = "plus" if e.p >= 2.0 else "minus"
            prof = radial.power_profile(args.alpha, R=args.R, orientation=orientation)
        E = kernel.burkholder(e)
        val, err = radial.energy_quadrature(E, prof, e)
        closed = radial.closed_form_energy(prof, e)
        gap = abs(val - closed)
        tol = args.tol if args.tol is not None else radial.ENERGY_MATCH_TOL
        ok = gap <= tol * (1.0 + abs(closed))
        rep = ExperimentReport(
            name="radial_energy",
            parameters={"p": args.p, "profile": prof.to_json(), "tol": tol},
            metrics={"quadrature": val, "quadrature_error": err, "closed_form": closed, "gap": gap},
            max_gap=gap,
            verdict=VERDICT_PASS if ok else VERDICT_FAIL,
        )
        if args.csv:
            radial.dump_radial_samples(E, prof, args.csv)
            rep.artifacts.append(args.csv)
    elif args.experiment == "example11":
        rep = radial.example_11_energy(e, R=args.R, r_outer=args.r_outer)
    elif args.experiment == "comparison":
        rng = np.random.default_rng(args.seed)
        lam = radial.random_matrix_profile(rng)
        rep = radial.radially_linear_comparison(kernel.burkholder(e), lam, e)
    elif args.experiment == "localmax":
        prof = radial.power_profile(1.0 - 2.0 / args.s, R=1.0)
        eps = radial.bump_perturbation(e, args.s, args.seed * 0.7, m=args.seed % 3)
        if args.oversize > 0:
            eps = radial.PerturbationField(eps.amplitude * args.oversize, eps.r0, eps.r1, eps.m)
        kw = {"tol": args.tol} if args.tol is not None else {}
        rep = radial.local_max_experiment(prof, args.s, eps, e, **kw)
    else:
        raise SystemExit(f"unknown experiment {args.experiment!r}")
    return _emit(args, rep, _echo(args))


def cmd_el(args) -> int:
    e_uv = elmod.burkholder_uv(args.p)
    if args.check == "pde-pair":
        worst = 0.0
        rows = []
        for (u, v) in elmod.quadrant_grid():
            r1, r2 = elmod.pde_pair_residual(e_uv, u, v)
            s = elmod.pde_pair_scale(e_uv, u, v)
            rows.append([u, v, r1, r2, s])
            worst = max(worst, abs(r1) / s, abs(r2) / s)
        tol = args.tol if args.tol is not None else 1e-9
        rep = ExperimentReport(
            name="pde_pair_residual",
            parameters={"p": args.p, "tol": tol},
            metrics={"max_relative_residual": worst},
            max_gap=worst,
            verdict=VERDICT_PASS if worst <= tol else VERDICT_FAIL,
        )
        if args.csv:
            write_csv(args.csv, ["u", "v", "residual_wave", "residual_axis", "term_scale"], rows)
            rep.artifacts.append(args.csv)
    elif args.check == "radial-el":
        prof = radial.power_profile(args.alpha, R=1.0)
        worst = 0.0
        for r in np.linspace(0.1, 1.0, 19):
            res = elmod.radial_el_residual(e_uv, prof, float(r))
            worst = max(worst, abs(res))
        tol = args.tol if args.tol is not None else 1e-8
        rep = ExperimentReport(
            name="radial_el_residual",
            parameters={"p": args.p, "alpha": args.alpha, "tol": tol},
            metrics={"max_residual": worst},
            max_gap=worst,
            verdict=VERDICT_PASS if worst <= tol else VERDICT_FAIL,
        )
    elif args.check == "ode-reduction":
        kw = {"tol": args.tol} if args.tol is not None else {}
        rep = elmod.ode_reduction_check(args.p, **kw)
    else:
        raise SystemExit(f"unknown check {args.check!r}")
    return _emit(args, rep, _echo(args))


def cmd_beurling(args) -> int:
    alphas = [float(a) for a in args.alpha] if args.alpha else None
    if alphas is None:
        lo = 1.0 - 2.0 / args.p
        alphas = [lo + d for d in (0.02, 0.05, 0.1, 0.15, 0.2)]
    estimates, rep = fftmod.norm_lower_bound_scan(args.p, alphas, n=args.n, L=args.L, R=args.R)
    if args.csv:
        write_csv(
            args.csv,
            ["alpha", "ratio", "ratio_coarse", "pointwise_ratio", "n", "L"],
            [[est.family_parameter, est.ratio, est.ratio_coarse, est.pointwise_ratio, est.n, est.L] for est in estimates],
        )
        rep.artifacts.append(args.csv)
    return _emit(args, rep, _echo(args))


def cmd_suite(args) -> int:
    """Run the full verification battery at one exponent."""
    e = kernel.Exponent(args.p)
    results: list[tuple[str, str]] = []

    def add(rep: ExperimentReport):
        results.append((rep.name, rep.verdict))

    add(verify.verify_bebu(e, samples=20_000, seed=args.seed))
    add(verify.verify_m_pointwise(e, e.burkholder_norm + 0.25, samples=20_000, seed=args.seed))
    add(verify.verify_aubert_pair(2.0 + math.sqrt(3.0), samples=20_000, seed=args.seed))
    add(verify.verify_envelope_majorant(e, grid_n=128))

    pr = probe.probe_rank_one_concavity(kernel.burkholder(e))
    results.append(("probe_burkholder", VERDICT_PASS if pr.verdict == "concave-on-sample" else VERDICT_FAIL))

    orientation = "plus" if e.p >= 2.0 else "minus"
    prof = radial.power_profile(0.5 if e.p < 4.0 else 0.6, orientation=orientation)
    E = kernel.burkholder(e)
    val, _ = radial.energy_quadrature(E, prof, e)
    closed = radial.closed_form_energy(prof, e)
    ok = abs(val - closed) <= 1e-7 * (1.0 + abs(closed))
    results.append(("radial_energy_identity", VERDICT_PASS if ok else VERDICT_FAIL))
    add(radial.example_11_energy(e))
    add(elmod.ode_reduction_check(e.p))

    verdict = VERDICT_PASS if all(v in (VERDICT_PASS, VERDICT_NOT_ASSERTED) for _, v in results) else VERDICT_FAIL
    rep = ExperimentReport(
        name="suite",
        parameters={"p": args.p, "seed": args.seed},
        metrics={name: v for name, v in results},
        verdict=verdict,
    )
    for name, v in results:
        print(f"  {name}: {v}")
    return _emit(args, rep, _echo(args))


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="burkbench", description=__doc__)
    ap.add_argument("--out", help="report output path (default: <command>.json in BURKBENCH_OUT_DIR or cwd)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=0, help="cap worker threads (0 = library default)")
    # the same options are accepted after the subcommand; SUPPRESS keeps an
    # unprovided one from clobbering a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p_eval = sub.add_parser("eval", help="evaluate an integrand at one gradient")
    p_eval.add_argument("--integrand", required=True,
                        choices=["burkholder", "burkholder_real", "burkholder_m", "beurling_m", "aubert",
                                 "envelope", "distortion"])
    p_eval.add_argument("--p", type=float)
    p_eval.add_argument("--M", type=float)
    p_eval.add_argument("--xi", type=_parse_complex, required=True, help="re,im")
    p_eval.add_argument("--zeta", type=_parse_complex, required=True, help="re,im")
    p_eval.set_defaults(func=cmd_eval)

    p_ver = sub.add_parser("verify", help="pointwise inequality verifiers")
    p_ver.add_argument("--check", required=True, choices=["bebu", "m-pointwise", "aubert-pair", "envelope-majorant"])
    p_ver.add_argument("--p", type=float, default=3.0)
    p_ver.add_argument("--M", type=float, default=2.5)
    p_ver.add_argument("--samples", type=int, default=100_000)
    p_ver.add_argument("--grid-n", type=int, default=256)
    p_ver.add_argument("--tol", type=float, help="pass tolerance override (default: module GAP_TOL)")
    p_ver.set_defaults(func=cmd_verify)

    p_pr = sub.add_parser("probe", help="rank-one concavity probe")
    p_pr.add_argument("--integrand", required=True, choices=["burkholder", "burkholder_m", "beurling_m", "aubert"])
    p_pr.add_argument("--p", type=float, default=3.0)
    p_pr.add_argument("--M", type=float, default=2.0)
    p_pr.add_argument("--expect", default="any", choices=["any", "concave-on-sample", "violation-found"])
    p_pr.set_defaults(func=cmd_probe)

    p_env = sub.add_parser("envelope", help="zig-zag concave envelope computation")
    p_env.add_argument("--p", type=float, default=3.0)
    p_env.add_argument("--integrand", default="beurling", choices=["beurling", "burkholder"])
    p_env.add_argument("--n", type=int, default=257)
    p_env.add_argument("--x-max", type=float, default=2.0)
    p_env.add_argument("--tol", type=float, default=1e-6)
    p_env.add_argument("--max-iter", type=int, default=500)
    p_env.add_argument("--csv", help="write the envelope grid as CSV")
    p_env.set_defaults(func=cmd_envelope)

    p_rad = sub.add_parser("radial", help="radial stretching experiments")
    p_rad.add_argument("--experiment", required=True, choices=["energy", "example11", "comparison", "localmax"])
    p_rad.add_argument("--p", type=float, default=3.0)
    p_rad.add_argument("--alpha", type=float, default=0.5)
    p_rad.add_argument("--R", type=float, default=1.0)
    p_rad.add_argument("--r-outer", type=float, default=50.0)
    p_rad.add_argument("--s", type=float, default=4.0)
    p_rad.add_argument("--oversize", type=float, default=0.0, help="scale the perturbation past the smallness bound")
    p_rad.add_argument("--profile-json", help="path to a profile definition file")
    p_rad.add_argument("--csv", help="dump radial integrand samples as CSV (energy experiment)")
    p_rad.add_argument("--tol", type=float, help="pass tolerance override (module default as fallback)")
    p_rad.set_defaults(func=cmd_radial)

    p_el = sub.add_parser("el", help="Euler-Lagrange residual checks")
    p_el.add_argument("--check", required=True, choices=["pde-pair", "radial-el", "ode-reduction"])
    p_el.add_argument("--p", type=float, default=3.0)
    p_el.add_argument("--alpha", type=float, default=0.5)
    p_el.add_argument("--csv", help="dump the residual grid as CSV (pde-pair check)")
    p_el.add_argument("--tol", type=float, help="pass tolerance override (module default as fallback)")
    p_el.set_defaults(func=cmd_el)

    p_fft = sub.add_parser("beurling", help="discrete Beurling transform lower-bound scan")
    p_fft.add_argument("--p", type=float, default=4.0)
    p_fft.add_argument("--alpha", type=float, nargs="*", help="family exponents (default: near-threshold ladder)")
    p_fft.add_argument("--n", type=int, default=512)
    p_fft.add_argument("--L", type=float, default=44.0)
    p_fft.add_argument("--R", type=float, default=10.0)
    p_fft.add_argument("--csv", help="write (alpha, ratio, ...) rows as CSV")
    p_fft.set_defaults(func=cmd_beurling)

    p_suite = sub.add_parser("suite", help="full verification battery at one exponent")
    p_suite.add_argument("--p", type=float, default=3.0)
    p_suite.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads and args.threads > 0:
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
        os.environ.setdefault("OPENBLAS_NUM_THREADS", str(args.threads))
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
