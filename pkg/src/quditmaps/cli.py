"""Command-line interface.

Subcommands: classify, region, area, trajectory, crossings, spectrum,
verify, apply.  All floating-point output uses 12 significant digits and
runs are deterministic given (seed, arguments).

Exit codes: 0 success, 1 property failure, 2 usage error, 3 closed-form /
oracle disagreement beyond the margin filter.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import dynamics, regions, verify
from .channels import MapParams, apply as apply_map, state_from_json, state_to_json
from .errors import QuditMapsError
from .generators import (
    GenParams,
    is_ccp,
    is_conditionally_positive,
    is_dissipative,
    spectrum_rates,
)
from .regions import MARGIN_FILTER

ENV_SEED = "QUDITMAPS_SEED"

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2
EXIT_DISAGREEMENT = 3


@dataclass
class RunConfig:
    d: int = 3
    tolerance: float = 1e-9
    seed: int = 42
    sample_budget: int = 10_000
    output_format: str = "json"
    output_path: str | None = None


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"  # +0.0 normalizes -0.0


def _round12(obj):
    """Round every float to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(_fmt(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(payload, output: str | None):
    _emit(json.dumps(_round12(payload), indent=2), output)


def _load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    cfg.seed = int(os.environ.get(ENV_SEED, cfg.seed))
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        for key, attr in (("d", "d"), ("tolerance", "tolerance"), ("seed", "seed"),
                          ("sample_budget", "sample_budget"),
                          ("output_format", "output_format"),
                          ("output_path", "output_path")):
            if key in data:
                setattr(cfg, attr, data[key])
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditmaps",
        description="Positivity classes, region geometry, and non-Markovian "
                    "dynamics of the qudit dephasing/depolarizing map family.",
    )
    parser.add_argument("--config", help="JSON RunConfig with defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, d_required=True):
        sp.add_argument("--d", type=int, required=d_required, help="qudit dimension")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--budget", type=int, default=None, help="sampling budget")
        sp.add_argument("--tolerance", type=float, default=None)
        sp.add_argument("--output", default=None, help="write to file instead of stdout")

    sp = sub.add_parser("classify", help="closed-form and oracle region membership")
    common(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)

    sp = sub.add_parser("region", help="region polygon vertices")
    common(sp)
    sp.add_argument("--which", required=True, choices=["p", "cp", "eb", "P", "CP", "EB"])
    sp.add_argument("--format", choices=["csv", "json"], default="csv")

    sp = sub.add_parser("area", help="closed-form and shoelace region areas")
    common(sp)

    sp = sub.add_parser("trajectory", help="(alpha(t), beta(t)) trajectory CSV")
    common(sp)
    sp.add_argument("--schedule", required=True,
                    choices=["const", "enm", "pdiv", "sdiv", "enm2", "weyl"])
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, required=True, dest="t_max")
    sp.add_argument("--steps", type=int, required=True)

    sp = sub.add_parser("crossings", help="region entry times of the semigroup")
    common(sp)
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--nu", type=float, required=True)

    sp = sub.add_parser("spectrum", help="relaxation rates and the rate bound")
    common(sp)
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--class", dest="positivity_class", default="kpos",
                    choices=["positive", "schwarz", "kpos"])

    sp = sub.add_parser("verify", help="run the invariants battery")
    sp.add_argument("--suite", default="all",
                    choices=["all"] + sorted(verify.SUITES))
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--output", default=None)

    sp = sub.add_parser("apply", help="evolve a JSON state under a schedule")
    common(sp, d_required=False)
    sp.add_argument("--state", required=True, help="path to a JSON state file")
    sp.add_argument("--schedule", required=True,
                    choices=["const", "enm", "pdiv", "sdiv", "enm2", "weyl"])
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--nu", type=float, default=0.0)
    sp.add_argument("--t", type=float, required=True)
    return parser


def _verdict_payload(v: regions.RegionVerdict) -> dict:
    return {
        "positive": bool(v.positive),
        "cp": bool(v.completely_positive),
        "eb": bool(v.entanglement_breaking),
        "margins": {
            "positive": v.margin_positive,
            "cp": v.margin_cp,
            "eb": v.margin_eb,
        },
    }


def cmd_classify(args, cfg) -> int:
    p = MapParams(args.d, args.alpha, args.beta)
    closed = regions.classify_point(p)
    oracle = regions.classify_numeric(
        p, sample_budget=args.budget or cfg.sample_budget,
        seed=cfg.seed if args.seed is None else args.seed,
        tol=args.tolerance or cfg.tolerance,
    )
    disagree = []
    for key, c_flag, o_flag, margin in (
        ("positive", closed.positive, oracle.positive, closed.margin_positive),
        ("cp", closed.completely_positive, oracle.completely_positive, closed.margin_cp),
        ("eb", closed.entanglement_breaking, oracle.entanglement_breaking, closed.margin_eb),
    ):
        if abs(margin) > MARGIN_FILTER and c_flag != o_flag:
            disagree.append(key)
    payload = {
        "d": args.d,
        "alpha": args.alpha,
        "beta": args.beta,
        "closed_form": _verdict_payload(closed),
        "oracle": _verdict_payload(oracle),
        "margins": _verdict_payload(closed)["margins"],
        "agreement": not disagree,
        "disagreements": disagree,
    }
    _emit_json(payload, args.output)
    return EXIT_OK if not disagree else EXIT_DISAGREEMENT


def cmd_region(args, cfg) -> int:
    poly = regions.region_polygon(args.which.upper(), args.d)
    if args.format == "json":
        _emit_json({"which": poly.which, "d": poly.d,
                    "vertices": [list(v) for v in poly.vertices]}, args.output)
    else:
        _emit(regions.polygon_csv(poly), args.output)
    return EXIT_OK


def cmd_area(args, cfg) -> int:
    payload = {}
    shoelace = {}
    for which in regions.REGIONS:
        rep = regions.region_area(which, args.d)
        payload[which] = rep.closed_form
        shoelace[which] = rep.shoelace
    payload["shoelace"] = shoelace
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_trajectory(args, cfg) -> int:
    sched = dynamics.schedule_from_name(args.schedule, args.d, args.kappa, args.nu)
    lines = ["t,alpha,beta,positive,cp,eb,min_choi_eig"]
    for t in np.linspace(0.0, args.t_max, args.steps + 1):
        pt = dynamics.trajectory_point(sched, float(t))
        lines.append(
            f"{_fmt(pt.t)},{_fmt(pt.alpha)},{_fmt(pt.beta)},"
            f"{int(pt.verdict.positive)},{int(pt.verdict.completely_positive)},"
            f"{int(pt.verdict.entanglement_breaking)},{_fmt(pt.min_choi_eig)}"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_crossings(args, cfg) -> int:
    rep = dynamics.crossing_times(args.d, args.kappa, args.nu)
    payload = {
        "t_P": rep.t_p,
        "t_CP": rep.t_cp,
        "t_EB": rep.t_eb,
        "margins": rep.margins,
        "horizon": rep.horizon,
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_spectrum(args, cfg) -> int:
    cls = {"kpos": "kpositive"}.get(args.positivity_class, args.positivity_class)
    params = GenParams(args.d, args.kappa, args.nu)
    rep = spectrum_rates(params, cls)
    seed = cfg.seed if args.seed is None else args.seed
    budget = args.budget or cfg.sample_budget
    pair = is_conditionally_positive(params, budget, seed)
    dis = is_dissipative(params, budget, seed)
    ccp = is_ccp(params)
    payload = {
        "d": rep.d,
        "gamma_diag": rep.gamma_diag,
        "gamma_offdiag": rep.gamma_offdiag,
        "gamma_total": rep.gamma_total,
        "gamma_max": rep.gamma_max,
        "class": rep.positivity_class,
        "c_d": rep.c_d,
        "bound_satisfied": rep.bound_satisfied,
        "bound_saturated": rep.bound_saturated,
        "class_tests": {
            "positive": {"closed_form": pair.closed_form,
                         "sampled": pair.sampled_min,
                         "seed": seed, "budget": budget},
            "schwarz": {"closed_form": dis.closed_form,
                        "witness": dis.min_witness_eig,
                        "sampled": dis.min_sampled_eig,
                        "seed": seed, "budget": budget},
            "cp": {"closed_form": ccp.closed_form,
                   "projected_min_eig": ccp.min_eig_projected},
        },
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_verify(args, cfg) -> int:
    seed = cfg.seed if args.seed is None else args.seed
    budget = args.budget or cfg.sample_budget
    results = verify.run_suite(args.suite, seed=seed, budget=budget)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name}: {r.detail}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if n_fail == 0 else EXIT_PROPERTY_FAILURE


def cmd_apply(args, cfg) -> int:
    with open(args.state, encoding="utf-8") as fh:
        state = state_from_json(json.load(fh))
    d = args.d or state.d
    sched = dynamics.schedule_from_name(args.schedule, d, args.kappa, args.nu)
    out = apply_map(dynamics.map_at(sched, args.t), state)
    _emit_json(state_to_json(out), args.output)
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "region": cmd_region,
    "area": cmd_area,
    "trajectory": cmd_trajectory,
    "crossings": cmd_crossings,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "apply": cmd_apply,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = _load_config(args.config)
        if getattr(args, "output", None) is None and cfg.output_path:
            args.output = cfg.output_path
        return COMMANDS[args.command](args, cfg)
    except QuditMapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
