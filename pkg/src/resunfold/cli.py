"""Command-line front end.

Commands: invariants, equiv, normalform, portrait, kappa, normcheck.
Every run writes a manifest echo next to its outputs so results are
reproducible from the recorded arguments alone.

Exit codes: 0 success / Equivalent, 1 NotEquivalent, 2 parse or config
error, 3 NonGeneric, 4 Indeterminate.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .geometry import (
    REGION_INNER,
    REGION_NAMES,
    REGION_OUTER,
    REGION_OUTER_P,
    DomainConfig,
    RamifiedPoint,
    bifurcation_sets,
    classify_regions,
    count_components,
    equilibria,
    trace_trajectory,
    write_bifurcations_csv,
    write_regions_csv,
    write_trajectories_csv,
)
from .invariants import NonGeneric, extract_formal, reduce
from .monodromy import gamma_numeric
from .normal_forms import (
    DegenerateDenominator,
    build_b_form,
    build_q_form,
    decide_equivalence,
    q_seed_for,
    solve_q,
)
from .normalization import (
    assemble_F,
    batch_verify,
    diagonalization_residual,
    inner_arc_solutions,
    kappa_formulas,
    p_equation_residual,
)
from .system import ParametricSystem
from .algebra import CSeries

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_PARSE = 2
EXIT_NON_GENERIC = 3
EXIT_INDETERMINATE = 4


def _round_sig(x: float, digits: int = 12) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def _jsonable(obj):
    """Round floats to 12 significant digits; complex -> [re, im]."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [_round_sig(obj.real), _round_sig(obj.imag)]
    if isinstance(obj, float):
        return _round_sig(obj)
    if isinstance(obj, (np.floating,)):
        return _round_sig(float(obj))
    if isinstance(obj, (np.complexfloating,)):
        return [_round_sig(float(obj.real)), _round_sig(float(obj.imag))]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _write_json(payload: dict, path: str) -> None:
    payload = dict(payload)
    payload.setdefault("schema_version", SCHEMA_VERSION)
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=1)
        fh.write("\n")


def _write_manifest(args, out_dir: str, outputs: list) -> None:
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "argv": [a for a in sys.argv[1:]],
        "outputs": outputs,
        "tol": getattr(args, "tol", None),
        "gamma_tol": getattr(args, "gamma_tol", None),
        "order": getattr(args, "order", None),
        "seed": getattr(args, "seed", None),
        "threads": getattr(args, "threads", None),
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(_jsonable(manifest), fh, indent=1)
        fh.write("\n")


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse complex number from '{text}'")


def _load_system(path: str) -> ParametricSystem:
    with open(path) as fh:
        return ParametricSystem.from_descriptor(json.load(fh))


def _ensure_outdir(args) -> str:
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_invariants(args) -> int:
    try:
        system = _load_system(args.system)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    F = extract_formal(system)
    try:
        params, _ = reduce(system, F)
    except NonGeneric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_GENERIC
    res = gamma_numeric(system, F, tol=args.gamma_tol,
                        validity_radius=args.validity_radius)
    payload = {
        "h": [F.h0, F.h1],
        "lambda": [F.lambda0, F.lambda1],
        "alpha": [F.alpha0, F.alpha1],
        "epsilon": params.epsilon,
        "mu": params.mu,
        "gamma": res.gamma,
        "est_error": res.est_error,
    }
    out = _ensure_outdir(args)
    path = os.path.join(out, "invariants.json")
    _write_json(payload, path)
    _write_manifest(args, out, ["invariants.json"])
    print(json.dumps(_jsonable(payload)))
    return EXIT_OK


def cmd_equiv(args) -> int:
    try:
        sys_a = _load_system(args.system_a)
        sys_b = _load_system(args.system_b)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        verdict, report = decide_equivalence(sys_a, sys_b, tol=args.tol,
                                             gamma_tol=args.gamma_tol,
                                             validity_radius=args.validity_radius)
    except NonGeneric as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_GENERIC
    out = _ensure_outdir(args)
    payload = {"verdict": verdict, **report}
    _write_json(payload, os.path.join(out, "equiv.json"))
    _write_manifest(args, out, ["equiv.json"])
    print(verdict)
    return {"Equivalent": EXIT_OK, "NotEquivalent": EXIT_NOT_EQUIVALENT,
            "Indeterminate": EXIT_INDETERMINATE}[verdict]


def cmd_normalform(args) -> int:
    try:
        with open(args.invariants) as fh:
            data = json.load(fh)
        h = data["h"]
        lam = data["lambda"]
        alpha = data["alpha"]
        from .invariants import FormalInvariants
        F = FormalInvariants(complex(*h[0]) if isinstance(h[0], list) else complex(h[0]),
                             complex(*h[1]) if isinstance(h[1], list) else complex(h[1]),
                             complex(*lam[0]) if isinstance(lam[0], list) else complex(lam[0]),
                             complex(*lam[1]) if isinstance(lam[1], list) else complex(lam[1]),
                             complex(*alpha[0]) if isinstance(alpha[0], list) else complex(alpha[0]),
                             complex(*alpha[1]) if isinstance(alpha[1], list) else complex(alpha[1]))
    except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad invariants file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.variant == "q":
            if args.param is not None:
                q = _parse_complex(args.param)
            else:
                gamma = complex(*data["gamma"]) if isinstance(data.get("gamma"), list) \
                    else complex(data["gamma"])
                q = solve_q(gamma, q_seed_for(gamma))
            system = build_q_form(F, q, order=args.order)
            param_out = {"q": q}
        else:
            if args.param is None:
                print("error: b-form needs --param", file=sys.stderr)
                return EXIT_PARSE
            b = _parse_complex(args.param)
            system = build_b_form(F, b, order=args.order)
            param_out = {"b": b}
    except (KeyError, DegenerateDenominator, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = _ensure_outdir(args)
    path = os.path.join(out, "normalform.json")
    descriptor = system.to_descriptor()
    descriptor.update(_jsonable(param_out))
    with open(path, "w") as fh:
        json.dump(descriptor, fh, indent=1)
    _write_manifest(args, out, ["normalform.json"])
    print(json.dumps(_jsonable(param_out)))
    return EXIT_OK


def cmd_portrait(args) -> int:
    mu = _parse_complex(args.mu)
    eps = _parse_complex(args.eps)
    omega = cmath.exp(1j * args.omega_arg) if args.omega is None \
        else _parse_complex(args.omega)
    cfg = DomainConfig(eta=args.eta, delta_s=args.delta_s, L=args.L,
                       xi_max=args.xi_max)
    if not cfg.feasible(args.sup_sr):
        print("error: annulus constants violate the contraction inequality",
              file=sys.stderr)
        return EXIT_PARSE
    rp = RamifiedPoint.from_values(mu, eps)
    out = _ensure_outdir(args)

    n = args.grid
    pts, labels = classify_regions(rp, omega, cfg, grid=(n, n))
    write_regions_csv(pts, labels, os.path.join(out, "regions.csv"))

    rng = np.random.default_rng(args.seed)
    # separatrix fan: short offsets around each singular point of the field
    sep_seeds = []
    for root in {rp.s1, -rp.s1, rp.s2, -rp.s2}:
        if abs(root) > 1e-8:
            for phase in (1.0, 1j, -1.0, -1j):
                sep_seeds.append(root + 1e-3 * phase * max(abs(root), 0.05))
    seeds = list(sep_seeds)
    while len(seeds) < len(sep_seeds) + args.trajectories:
        z = cfg.delta_s * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        if abs(z) > 0.2 * cfg.delta_s:
            seeds.append(z)

    def trace(seed):
        return trace_trajectory(seed, omega, rp, cfg)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            records = list(pool.map(trace, seeds))
    else:
        records = [trace(s) for s in seeds]
    write_trajectories_csv(records, os.path.join(out, "trajectories.csv"),
                           stride=max(1, int(0.05 / cfg.trace_step)))

    curves = bifurcation_sets(eps, resolution=200)
    write_bifurcations_csv(curves, os.path.join(out, "bifurcations.csv"))

    outer_mask = (labels == REGION_OUTER) | (labels == REGION_OUTER_P)
    # outer points hugging |s| = delta_s signal the outer-region bifurcation
    # (the bounding trajectory is about to leave through the disc boundary)
    grid_step = 2.0 * cfg.delta_s / max(n - 1, 1)
    boundary_touch = bool(outer_mask.any() and
                          np.any(np.abs(pts[outer_mask]) >
                                 cfg.delta_s - 1.5 * grid_step))
    grid_step_x = 2.0 * cfg.delta_s / max(n - 1, 1)
    eq_pts = [e.s for e in equilibria(rp)]
    inner_components = count_components(
        pts, labels, REGION_INNER, n, n, exclude=eq_pts,
        exclude_radius=cfg.parabolic_capture + 2.0 * grid_step_x)
    summary = {
        "mu": mu, "eps": eps, "omega": omega,
        "label_counts": {REGION_NAMES[k]: int(np.sum(labels == k))
                         for k in REGION_NAMES},
        "inner_components": inner_components,
        "outer_empty": bool(not outer_mask.any()),
        "outer_boundary_touching": bool(boundary_touch),
    }
    _write_json(summary, os.path.join(out, "summary.json"))
    _write_manifest(args, out, ["regions.csv", "trajectories.csv",
                                "bifurcations.csv", "summary.json"])
    print(json.dumps(_jsonable(summary["label_counts"])))
    return EXIT_OK


def cmd_kappa(args) -> int:
    report = batch_verify(args.samples, seed=args.seed, mu_abs=args.mu_abs,
                          eps_abs_range=(args.eps_abs_min, args.eps_abs_max))
    # Stirling-limit rows
    rp_i = RamifiedPoint.from_values(0.09, 1e-6)
    kI, _, _ = kappa_formulas(rp_i, 0.1)
    rp_o = RamifiedPoint.from_values(1e-3 * cmath.exp(0.7j), 1e-6)
    _, kO, _ = kappa_formulas(rp_o, 0.03)
    report["stirling"] = {
        "kappa_I_eps_1e-6_minus_1": abs(kI - 1.0),
        "kappa_O_origin_minus_1": abs(kO - 1.0),
    }
    if args.no_rows:
        report.pop("rows")
    out = _ensure_outdir(args)
    _write_json(report, os.path.join(out, "kappa_report.json"))
    _write_manifest(args, out, ["kappa_report.json"])
    print(json.dumps(_jsonable({k: v["max"] for k, v in report["residuals"].items()})))
    if report["pole_fraction"] > 0.10:
        print("error: gamma-pole saturation above 10%", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def cmd_normcheck(args) -> int:
    mu = _parse_complex(args.mu)
    eps = _parse_complex(args.eps)
    omega = cmath.exp(1j * args.omega_arg) if args.omega is None \
        else _parse_complex(args.omega)
    r = None
    if args.r_coeffs:
        coeffs = [_parse_complex(c) for c in args.r_coeffs.split(";")]
        r = CSeries(coeffs, args.order)
    cfg = DomainConfig(eta=args.eta, delta_s=args.delta_s, L=args.L,
                       trace_step=args.trace_step,
                       parabolic_capture=args.parabolic_capture,
                       xi_max=args.xi_max)
    sup_sr = 0.0
    if r is not None:
        ss = np.linspace(-cfg.delta_s, cfg.delta_s, 101)
        grid = ss[None, :] + 1j * ss[:, None]
        sup_sr = float(np.max(np.abs(grid * r.eval(grid * grid - mu))))
    if not cfg.feasible(sup_sr):
        print("error: contraction inequality violated for this r", file=sys.stderr)
        return EXIT_PARSE
    rp = RamifiedPoint.from_values(mu, eps)
    seed_dir = None
    if args.seed_dir:
        seed_dir = _parse_complex(args.seed_dir)
    try:
        sol_i, sol_j = inner_arc_solutions(rp, omega, cfg, r=r, seed_dir=seed_dir,
                                           tol=args.tol)
        asm = assemble_F(sol_i, sol_j, rp, r=r, interior=0.1)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    ratios = sol_i.contraction_ratios
    payload = {
        "mu": mu, "eps": eps, "omega": omega, "sup_sr": sup_sr,
        "picard_sweeps": len(sol_i.contraction_history),
        "contraction_ratio_max": float(np.max(ratios)) if len(ratios) else 0.0,
        "sup_p": sol_i.sup_norm(),
        "p_terminal": abs(sol_i.terminal_value()),
        "p_residual": p_equation_residual(sol_i, r),
        "det_rel_std": asm.det_rel_std,
        "kappa_estimate": asm.kappa_estimate,
        "diag_residual": diagonalization_residual(asm, r),
    }
    out = _ensure_outdir(args)
    _write_json(payload, os.path.join(out, "normcheck.json"))
    _write_manifest(args, out, ["normcheck.json"])
    print(json.dumps(_jsonable({k: payload[k] for k in
                                ("contraction_ratio_max", "det_rel_std",
                                 "diag_residual")})))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="resunfold",
                                description=__doc__.strip().splitlines()[0])
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="comparison tolerance for equivalence decisions")
    p.add_argument("--gamma-tol", type=float, default=1e-9, dest="gamma_tol",
                   help="local error tolerance of the monodromy integrator")
    p.add_argument("--order", type=int, default=24, help="series truncation order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("invariants", help="formal + analytic invariants of a system")
    q.add_argument("system")
    q.add_argument("--validity-radius", type=float, default=math.inf)
    q.set_defaults(func=cmd_invariants)

    q = sub.add_parser("equiv", help="decide analytic equivalence of two systems")
    q.add_argument("system_a")
    q.add_argument("system_b")
    q.add_argument("--validity-radius", type=float, default=math.inf)
    q.set_defaults(func=cmd_equiv)

    q = sub.add_parser("normalform", help="build a q- or b-form from invariants")
    q.add_argument("invariants")
    q.add_argument("--variant", choices=["q", "b"], default="q")
    q.add_argument("--param", default=None,
                   help="q or b value as 're,im' (q defaults to solving gamma)")
    q.set_defaults(func=cmd_normalform)

    q = sub.add_parser("portrait", help="trajectories, regions and bifurcation CSVs")
    q.add_argument("--mu", required=True)
    q.add_argument("--eps", required=True)
    q.add_argument("--omega", default=None)
    q.add_argument("--omega-arg", type=float, default=0.0, dest="omega_arg")
    q.add_argument("--grid", type=int, default=41)
    q.add_argument("--trajectories", type=int, default=8)
    q.add_argument("--eta", type=float, default=math.pi / 6)
    q.add_argument("--delta-s", type=float, default=0.5, dest="delta_s")
    q.add_argument("--L", type=float, default=2.0)
    q.add_argument("--xi-max", type=float, default=None, dest="xi_max")
    q.add_argument("--sup-sr", type=float, default=0.0, dest="sup_sr")
    q.set_defaults(func=cmd_portrait)

    q = sub.add_parser("kappa", help="connection-coefficient identity residuals")
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--mu-abs", type=float, default=0.1, dest="mu_abs")
    q.add_argument("--eps-abs-min", type=float, default=1e-4, dest="eps_abs_min")
    q.add_argument("--eps-abs-max", type=float, default=1e-2, dest="eps_abs_max")
    q.add_argument("--no-rows", action="store_true", dest="no_rows",
                   help="omit the per-sample residual rows from the report")
    q.set_defaults(func=cmd_kappa)

    q = sub.add_parser("normcheck", help="Picard solve + diagonalizer assembly")
    q.add_argument("--mu", required=True)
    q.add_argument("--eps", required=True)
    q.add_argument("--omega", default=None)
    q.add_argument("--omega-arg", type=float, default=0.0, dest="omega_arg")
    q.add_argument("--r-coeffs", default=None, dest="r_coeffs",
                   help="semicolon-separated complex coefficients of r")
    q.add_argument("--seed-dir", default=None, dest="seed_dir")
    q.add_argument("--eta", type=float, default=math.pi / 6)
    q.add_argument("--delta-s", type=float, default=0.5, dest="delta_s")
    q.add_argument("--L", type=float, default=2.0)
    q.add_argument("--trace-step", type=float, default=5e-3, dest="trace_step")
    q.add_argument("--parabolic-capture", type=float, default=1e-2,
                   dest="parabolic_capture")
    q.add_argument("--xi-max", type=float, default=None, dest="xi_max")
    q.set_defaults(func=cmd_normcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_PARSE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
