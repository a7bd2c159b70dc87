"""Command-line experiment runner.

Subcommands: flow, elastica, fig8, scenario, check, special-eval,
acceptance.  Report paths write CSV/JSON records and matplotlib figures
side by side.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import acceptance, checks, elastica, plotting, scenarios, serialization, special
from .flow import FlowConfig, FlowStepError, WeightFunction, run, willmore_threshold_check
from .geometry import DiscreteCurve, elastic_energy, hyperbolic_length, willmore_energy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4


class ConfigError(ValueError):
    pass


def read_config_file(path: str) -> dict:
    """Flat key=value configuration; '#' starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def _apply_config_defaults(args: argparse.Namespace,
                           argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Fill argument values from --config file entries; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    given = argv if argv is not None else sys.argv[1:]
    for key, raw in read_config_file(args.config).items():
        if not hasattr(args, key) or key in ("config", "func", "command"):
            raise ConfigError(f"unknown config key {key!r}")
        if f"--{key.replace('_', '-')}" in given:
            continue  # explicit flag wins
        current = getattr(args, key)
        val: object = raw
        if isinstance(current, bool):
            val = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int):
            val = int(raw)
        elif isinstance(current, float) or current is None:
            try:
                val = float(raw)
            except ValueError:
                val = raw
        setattr(args, key, val)
    return args


# ---------------------------------------------------------------------------
# scenario construction

def build_scenario(args: argparse.Namespace) -> DiscreteCurve:
    if not args.scenario:
        raise ConfigError("no scenario selected (pass --scenario or set it in --config)")
    name = args.scenario.replace("-", "_")
    if name == "catenary":
        return scenarios.catenary(args.eps, args.half_width, args.n)
    if name == "clifford_circle":
        arc = (args.arc_lo, args.arc_hi)
        return scenarios.clifford_circle(args.x_center, args.scale, args.n, arc=arc)
    if name == "cap_circle":
        return scenarios.cap_circle(args.h, args.n, arc=(args.arc_lo, args.arc_hi))
    if name == "perturbed_geodesic":
        return scenarios.perturbed_geodesic(args.y0, args.y1, args.n,
                                            amplitude=args.amplitude, mode=args.mode)
    if name == "singular_datum":
        return scenarios.build_singular_datum(args.lam, h=args.h, n=args.n)
    raise ConfigError(f"unknown scenario {args.scenario!r}")


def _add_scenario_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scenario", default=None,
                     choices=["catenary", "clifford-circle", "cap-circle",
                              "perturbed-geodesic", "singular-datum"],
                     help="initial datum constructor (required here or in --config)")
    sub.add_argument("--eps", type=float, default=1.0, help="catenary waist height")
    sub.add_argument("--half-width", type=float, default=1.0,
                     help="catenary half-width of the x interval")
    sub.add_argument("--x-center", type=float, default=0.0, help="circle center abscissa")
    sub.add_argument("--scale", type=float, default=1.0, help="circle scale factor")
    sub.add_argument("--arc-lo", type=float, default=0.0, help="arc start angle")
    sub.add_argument("--arc-hi", type=float, default=float(2.0 * np.pi),
                     help="arc end angle")
    sub.add_argument("--h", type=float, default=float(2.0 * scenarios.H_MIN),
                     help="cap-circle size parameter")
    sub.add_argument("--y0", type=float, default=1.0, help="geodesic start height")
    sub.add_argument("--y1", type=float, default=float(np.e), help="geodesic end height")
    sub.add_argument("--amplitude", type=float, default=0.0,
                     help="horizontal perturbation amplitude")
    sub.add_argument("--mode", type=int, default=1, help="perturbation mode number")
    sub.add_argument("--lam", type=float, default=0.1,
                     help="figure-eight multiplier of the glued singular datum")
    sub.add_argument("--n", type=int, default=401, help="node count")
    sub.add_argument("--seed", type=int, default=0,
                     help="random seed recorded in the manifest")


def _add_flow_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--weight", choices=["willmore", "elastic"], default="willmore",
                     help="flow weight")
    sub.add_argument("--dt", type=float, default=None, help="fixed initial step size")
    sub.add_argument("--dt-max", type=float, default=None,
                     help="cap on adaptive step growth (inf disables)")
    sub.add_argument("--t-max", type=float, default=1.0, help="time budget")
    sub.add_argument("--max-steps", type=int, default=100_000, help="step budget")
    sub.add_argument("--grad-tol", type=float, default=None,
                     help="stop when the gradient norm drops below this")
    sub.add_argument("--length-stop-factor", type=float, default=10.0,
                     help="stop when length exceeds this multiple of the start")
    sub.add_argument("--min-height-stop", type=float, default=1e-3,
                     help="stop when the curve drops below this height")
    sub.add_argument("--energy-increase-tol", type=float, default=1e-12,
                     help="per-step energy increase tolerated by the line search")
    sub.add_argument("--dt-growth", type=float, default=1.25,
                     help="step regrowth factor after accepted steps")
    sub.add_argument("--reparam-every", type=int, default=25,
                     help="arclength resampling cadence in steps (0 disables)")
    sub.add_argument("--monitor-every", type=int, default=10,
                     help="trajectory sampling cadence in steps")
    sub.add_argument("--snapshot-every", type=int, default=0,
                     help="curve snapshot cadence in steps (0: ends only)")
    sub.add_argument("--symmetrize", action="store_true",
                     help="project onto mirror-symmetric curves at each resample")


def _flow_config(args: argparse.Namespace) -> FlowConfig:
    return FlowConfig(
        weight=WeightFunction(args.weight),
        dt=args.dt,
        dt_max=args.dt_max,
        t_max=args.t_max,
        max_steps=args.max_steps,
        grad_tol=args.grad_tol,
        length_stop_factor=args.length_stop_factor,
        min_height_stop=args.min_height_stop,
        energy_increase_tol=args.energy_increase_tol,
        dt_growth=args.dt_growth,
        reparam_every=args.reparam_every,
        monitor_every=args.monitor_every,
        snapshot_every=args.snapshot_every,
        symmetrize=args.symmetrize,
    )


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommand mains

def cmd_flow(args: argparse.Namespace) -> int:
    curve = build_scenario(args)
    config = _flow_config(args)
    out = _out_dir(args)
    threshold_ok, margin = willmore_threshold_check(curve)
    result = run(curve, config)
    if result.verdict == "step_failure":
        print("numerical failure: the line search could not dissipate energy",
              file=sys.stderr)
        return EXIT_NUMERICAL
    serialization.write_trajectory_csv(out / "trajectory.csv", result.trajectory)
    serialization.write_curve_csv(out / "curve_initial.csv", result.snapshots[0][1])
    serialization.write_curve_csv(out / "curve_final.csv", result.state.curve)
    for idx, (t, snap) in enumerate(result.snapshots):
        serialization.write_curve_csv(out / f"snapshot_{idx:04d}.csv", snap)
    final = result.trajectory[-1]
    manifest = {
        "config": config,
        "scenario": {key: getattr(args, key) for key in
                     ("scenario", "n", "seed") if hasattr(args, key)},
        "verdict": result.verdict,
        "steps": result.state.step_count,
        "t_final": result.state.t,
        "below_energy_threshold": threshold_ok,
        "energy_threshold_margin": margin,
        "final_report": final,
        "snapshots": [f"snapshot_{i:04d}.csv" for i in range(len(result.snapshots))],
    }
    serialization.write_manifest(out / "manifest.json", manifest)
    if not args.no_figures:
        plotting.render_trajectory(out / "trajectory.png", result.trajectory,
                                   title=f"{args.scenario} ({args.weight})")
        plotting.render_snapshots(out / "snapshots.png", result.snapshots,
                                  title=f"{args.scenario} curves")
    print(json.dumps({"verdict": result.verdict, "steps": result.state.step_count,
                      "t_final": result.state.t, "elastic": final.elastic,
                      "length": final.length, "out": str(out)}))
    return EXIT_OK


def cmd_elastica(args: argparse.Namespace) -> int:
    params = elastica.classify(args.kappa0_sq, args.lam)
    curve = elastica.parametrize(params, args.s_lo, args.s_hi, args.n, y=args.y)
    out = _out_dir(args)
    serialization.write_curve_csv(out / "elastica.csv", curve)
    serialization.write_curve_json(out / "elastica.json", curve)
    if not args.no_figures:
        plotting.render_curve(out / "elastica.png", curve,
                              title=f"{params.family} (lam={params.lam})")
    print(json.dumps({"family": params.family, "lam": params.lam,
                      "kappa0_sq": params.kappa0**2, "p": params.p, "r": params.r,
                      "first_integral": params.first_integral,
                      "elastic_energy": elastic_energy(curve), "out": str(out)}))
    return EXIT_OK


def cmd_fig8(args: argparse.Namespace) -> int:
    f8 = elastica.figure_eight_solve(args.lam)
    curve = elastica.figure_eight_segment(f8, n=args.n)
    record = {
        "lam": f8.lam,
        "p": f8.p,
        "r": f8.r,
        "kappa0_sq": f8.kappa0**2,
        "first_integral": f8.first_integral,
        "a": curve.metadata.get("a"),
        "c": curve.metadata.get("c"),
        "segment_energy": f8.segment_energy(),
        "closing_residual": f8.closing_residual,
        "closure_gap": curve.metadata["closure_gap"],
    }
    if args.out:
        out = _out_dir(args)
        serialization.write_curve_csv(out / "figure_eight.csv", curve)
        serialization.write_manifest(out / "figure_eight.json", record)
        if not args.no_figures:
            plotting.render_curve(out / "figure_eight.png", curve,
                                  title=f"figure-eight (lam={f8.lam})")
    print(json.dumps(record))
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    curve = build_scenario(args)
    out = _out_dir(args)
    serialization.write_curve_csv(out / "curve.csv", curve)
    serialization.write_curve_json(out / "curve.json", curve)
    if not args.no_figures:
        plotting.render_curve(out / "curve.png", curve, title=args.scenario)
    record = {
        "scenario": args.scenario,
        "n": curve.n,
        "elastic_energy": elastic_energy(curve),
        "willmore_energy": willmore_energy(curve),
        "length": hyperbolic_length(curve),
        "min_height": float(curve.nodes[:, 1].min()),
        "metadata": curve.metadata,
    }
    serialization.write_manifest(out / "scenario.json", record)
    print(json.dumps({"scenario": args.scenario, "n": curve.n,
                      "elastic_energy": record["elastic_energy"],
                      "out": str(out)}))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    curve = serialization.read_curve_csv(args.input, closed=args.closed)
    report = checks.self_intersections(curve, tol=args.tol)
    record = report.as_dict()
    record["liyau"] = checks.liyau_check(curve, tol=args.tol)
    print(json.dumps(record))
    return EXIT_OK


_SPECIAL_FUNCTIONS = {
    "sn": lambda x, p: special.jacobi_sn(x, p),
    "cn": lambda x, p: special.jacobi_cn(x, p),
    "dn": lambda x, p: special.jacobi_dn(x, p),
    "am": lambda x, p: special.jacobi_am(x, p),
    "K": lambda x, p: special.complete_k(p),
    "E": lambda x, p: special.complete_e(p),
    "F": lambda x, p: special.ellip_f(x, p),
    "Einc": lambda x, p: special.ellip_e_inc(x, p),
}


def cmd_special_eval(args: argparse.Namespace) -> int:
    if args.fn == "Pi":
        val = special.ellip_pi(args.alpha2, args.x, args.p)
    else:
        val = _SPECIAL_FUNCTIONS[args.fn](args.x, args.p)
    print(repr(float(val)))
    return EXIT_OK


def cmd_acceptance(args: argparse.Namespace) -> int:
    only = [int(tok) for tok in args.only.split(",")] if args.only else None
    if only:
        known = range(1, len(acceptance.ALL_CRITERIA) + 1)
        bad = [k for k in only if k not in known]
        if bad:
            raise ConfigError(f"unknown criterion number(s): {bad} "
                              f"(valid: 1..{len(acceptance.ALL_CRITERIA)})")
    results = acceptance.run_all(only=only)
    if args.out:
        out = _out_dir(args)
        serialization.write_manifest(out / "acceptance.json", {
            "results": [{"name": r.name, "passed": r.passed,
                         "detail": r.detail, "seconds": r.seconds}
                        for r in results],
        })
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypflow",
        description="Weighted elastic flow of curves in the hyperbolic "
                    "half-plane: scenarios, closed-form elastica, checks, "
                    "and the acceptance suite.")
    subs = parser.add_subparsers(dest="command", required=True)

    flow = subs.add_parser("flow", help="run a flow and write trajectory/curve reports")
    _add_scenario_arguments(flow)
    _add_flow_arguments(flow)
    flow.add_argument("--out", default="flow_out", help="output directory")
    flow.add_argument("--config", default=None, help="flat key=value config file")
    flow.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    flow.set_defaults(func=cmd_flow)

    ela = subs.add_parser("elastica", help="emit a closed-form elastica curve")
    ela.add_argument("--lam", type=float, default=0.0, help="multiplier")
    ela.add_argument("--kappa0-sq", type=float, required=True, help="peak curvature squared")
    ela.add_argument("--s-lo", type=float, default=-1.0, help="arclength start")
    ela.add_argument("--s-hi", type=float, default=1.0, help="arclength end")
    ela.add_argument("--n", type=int, default=1001, help="node count")
    ela.add_argument("--y", type=float, default=1.0, help="height of the curvature peak")
    ela.add_argument("--out", default="elastica_out", help="output directory")
    ela.add_argument("--config", default=None, help="flat key=value config file")
    ela.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    ela.set_defaults(func=cmd_elastica)

    fig8 = subs.add_parser("fig8", help="solve the figure-eight closing problem")
    fig8.add_argument("--lam", type=float, required=True, help="multiplier")
    fig8.add_argument("--n", type=int, default=2001, help="node count of the segment")
    fig8.add_argument("--out", default=None, help="optional output directory")
    fig8.add_argument("--config", default=None, help="flat key=value config file")
    fig8.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    fig8.set_defaults(func=cmd_fig8)

    scen = subs.add_parser("scenario", help="construct and export an initial datum")
    _add_scenario_arguments(scen)
    scen.add_argument("--out", default="scenario_out", help="output directory")
    scen.add_argument("--config", default=None, help="flat key=value config file")
    scen.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    scen.set_defaults(func=cmd_scenario)

    chk = subs.add_parser("check", help="self-intersection / embeddedness report")
    chk.add_argument("--input", required=True, help="curve CSV (param,x,y)")
    chk.add_argument("--tol", type=float, default=checks.NEAR_TOUCH_TOL,
                     help="near-touch tolerance")
    chk.add_argument("--closed", action="store_true", help="treat the curve as closed")
    chk.set_defaults(func=cmd_check)

    spe = subs.add_parser("special-eval", help="evaluate a special function")
    spe.add_argument("--fn", required=True,
                     choices=sorted(_SPECIAL_FUNCTIONS) + ["Pi"],
                     help="function name")
    spe.add_argument("--x", type=float, default=0.0, help="argument (or amplitude)")
    spe.add_argument("--p", type=float, required=True, help="elliptic modulus")
    spe.add_argument("--alpha2", type=float, default=0.0,
                     help="characteristic of the third-kind integral")
    spe.set_defaults(func=cmd_special_eval)

    acc = subs.add_parser("acceptance", help="run the acceptance suite")
    acc.add_argument("--only", default=None,
                     help="comma-separated criterion numbers to run")
    acc.add_argument("--out", default=None, help="optional output directory")
    acc.set_defaults(func=cmd_acceptance)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_defaults(args, argv)
        return args.func(args)
    except (ConfigError, ValueError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except FlowStepError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
