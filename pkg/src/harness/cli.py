"""Command-Line Interface

``pam-lab <command> --config <path> --out <dir> [--seed N]`` with the
commands sample-noise, build-enhancement, solve, fk-check, norm, converge
and validate. Exit status: 0 success, 1 failed check or solver error,
2 configuration error.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from ..besov import (
    WaveletBasis,
    analyze,
    level_table,
    neg_holder_norm,
    regularity_estimate,
)
from ..config import ConfigFactory, ExperimentConfig, set_config
from ..enhancement import build_enhancement, save_enhancement
from ..exceptions import ConfigurationError, PAMLabError
from ..lattice import (
    Field,
    WeightSpec,
    make_grid,
    read_field,
    weighted_sup_norm,
    write_fields,
)
from ..logging_config import setup_logging
from ..solver import feynman_kac, save_trajectory, solve_direct, solve_transformed
from ..stochastics import PROFILE_NAME, sample_white_noise
from .experiments import (
    grid_label,
    initial_condition,
    report_manifest,
    run_convergence_study,
)
from .reports import CheckResult, LevelRecord, NormRow, Report
from .validation import CHECKS, SIGMAS, run_validation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

Command = Callable[[argparse.Namespace, ExperimentConfig], int]


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative, got {value}")
    return value


def _seed(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    return int(args.seed) if args.seed is not None else int(cfg.noise.seeds[0])


def _epsilon(args: argparse.Namespace, cfg: ExperimentConfig) -> float:
    if getattr(args, "epsilon", None) is not None:
        return float(args.epsilon)
    return float(cfg.mollifier.eps_ladder[-1])


def cmd_sample_noise(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.grid.L, cfg.grid.n)
    seed = _seed(args, cfg)
    noise = sample_white_noise(grid, seed)
    manifest = {"seed": seed, "grid": grid_label(grid)}
    root = write_fields(args.out, {"xi": noise.field}, manifest)
    logger.info(f"White noise seed={seed} written to {root}")
    return EXIT_OK


def cmd_build_enhancement(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.grid.L, cfg.grid.n)
    seed = _seed(args, cfg)
    noise = sample_white_noise(grid, seed)
    ladder = [args.epsilon] if args.epsilon is not None else cfg.mollifier.eps_ladder
    for eps in ladder:
        enh = build_enhancement(noise, eps)
        save_enhancement(enh, Path(args.out) / f"eps_{eps:g}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.grid.L, cfg.grid.n)
    seed = _seed(args, cfg)
    enh = build_enhancement(sample_white_noise(grid, seed), _epsilon(args, cfg))
    u0 = initial_condition(grid, cfg.noise.u0_width)
    C = 0.0 if args.no_renormalise else enh.C_eps
    extra = {"seed": seed, "epsilon": enh.epsilon, "C": repr(C), **cfg.to_flat_dict()}
    direct = solve_direct(enh.xi_eps, C, u0, cfg.solver)
    save_trajectory(direct, Path(args.out) / "direct", cfg.solver.T, extra)
    if args.transformed:
        solution = solve_transformed(enh, u0, cfg.solver, cfg.report.collar)
        extra["picard_iterations"] = solution.iterations
        target = Path(args.out) / "transformed"
        save_trajectory(solution.u, target, cfg.solver.T, extra)
    return EXIT_OK


def cmd_fk_check(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.grid.L, cfg.grid.n)
    seed = _seed(args, cfg)
    eps = _epsilon(args, cfg)
    enh = build_enhancement(sample_white_noise(grid, seed), eps)
    u0 = initial_condition(grid, cfg.noise.u0_width)
    point = (float(args.x[0]), float(args.x[1]))
    scfg = dataclasses.replace(cfg.solver, T=args.t)
    direct = solve_direct(enh.xi_eps, enh.C_eps, u0, scfg)
    value = direct.final.value_at(point)
    estimate = feynman_kac(
        enh.xi_eps, enh.C_eps, u0, args.t, point, cfg.fk.walkers, cfg.fk.dt, seed=seed
    )
    half = SIGMAS * estimate.stderr
    report = Report(cfg.name, report_manifest(cfg))
    row = report.add_row(
        "checks",
        CheckResult,
        check="fk_check",
        seed_count=1,
        epsilon=eps,
        grid=grid_label(grid),
        measured=value,
        lower=estimate.mean - half,
        upper=estimate.mean + half,
        status="pass" if abs(value - estimate.mean) <= half else "fail",
        detail=f"t={args.t}, x={point}, {estimate.exits} exits",
    )
    report.write(args.out)
    return EXIT_OK if row.status == "pass" else EXIT_FAILURE


def _norm_rows(
    name: str, f: Field, seed: Optional[int], cfg: ExperimentConfig, report: Report
) -> None:
    alpha = -1.0 - cfg.solver.kappa
    w = WeightSpec.polynomial(cfg.solver.a)
    pyramid = analyze(f, WaveletBasis(), cfg.report.collar)
    try:
        alpha_hat: Optional[float] = regularity_estimate(pyramid, w).alpha
    except PAMLabError:
        alpha_hat = None
    report.add_row(
        "norms",
        NormRow,
        field=name,
        seed=seed,
        grid=grid_label(f.grid),
        weighted_sup=weighted_sup_norm(f, w, cfg.report.collar),
        alpha=alpha,
        neg_holder=neg_holder_norm(pyramid, alpha, w),
        alpha_hat=alpha_hat,
    )
    report.add(
        "levels",
        [
            LevelRecord(
                field=name,
                seed=seed,
                level=r.level,
                sup_coeff=r.sup_coeff,
                weight_at_argmax=r.weight_at_argmax,
            )
            for r in level_table(pyramid, w)
        ],
    )


def cmd_norm(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    report = Report(cfg.name, report_manifest(cfg))
    if args.field:
        _norm_rows(Path(args.field).stem, read_field(args.field), None, cfg, report)
    else:
        grid = make_grid(cfg.grid.L, cfg.grid.n)
        seed = _seed(args, cfg)
        noise = sample_white_noise(grid, seed)
        enh = build_enhancement(noise, _epsilon(args, cfg))
        report.manifest["mollifier_profile"] = PROFILE_NAME
        for name, f in (("xi", noise.field), ("xi_eps", enh.xi_eps), ("Y", enh.Y)):
            _norm_rows(name, f, seed, cfg, report)
    report.write(args.out)
    return EXIT_OK


def cmd_converge(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if args.seed is not None:
        cfg.noise.seeds = [int(args.seed)]
    report = run_convergence_study(cfg, renormalise=not args.no_renormalise)
    report.write(args.out)
    return EXIT_FAILURE if report.failed else EXIT_OK


def cmd_validate(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    if args.seed is not None:
        cfg.noise.seeds = [int(args.seed)]
    report = run_validation(cfg, checks=args.check)
    report.write(args.out)
    return EXIT_FAILURE if report.failed else EXIT_OK


COMMANDS: Dict[str, Command] = {
    "sample-noise": cmd_sample_noise,
    "build-enhancement": cmd_build_enhancement,
    "solve": cmd_solve,
    "fk-check": cmd_fk_check,
    "norm": cmd_norm,
    "converge": cmd_converge,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pam-lab",
        description="Numerical laboratory for the parabolic Anderson model",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = commands.add_parser(name)
        sub.add_argument("--config", required=True, help="Configuration file")
        sub.add_argument("--out", required=True, help="Output directory")
        sub.add_argument(
            "--seed", type=_non_negative, default=None, help="Noise seed override"
        )
        if name in ("build-enhancement", "solve", "fk-check", "norm"):
            sub.add_argument("--epsilon", type=float, default=None)
        if name in ("solve", "converge"):
            sub.add_argument("--no-renormalise", action="store_true")
        if name == "solve":
            sub.add_argument("--transformed", action="store_true")
        if name == "fk-check":
            sub.add_argument("--t", type=float, default=0.05)
            sub.add_argument("--x", type=float, nargs=2, default=(0.0, 0.0))
        if name == "norm":
            sub.add_argument("--field", default=None, help="PAMF file to measure")
        if name == "validate":
            sub.add_argument("--check", action="append", choices=sorted(CHECKS))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit status."""
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    try:
        cfg = ConfigFactory.load_from_file(args.config)
    except ConfigurationError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    set_config(cfg)
    setup_logging(cfg.log_level, cfg.environment)
    try:
        return COMMANDS[args.command](args, cfg)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PAMLabError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_FAILURE


__all__: List[str] = ["COMMANDS", "build_parser", "main"]
