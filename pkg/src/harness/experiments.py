"""Convergence Study Driver

Fans (seed, ε) rungs out to a thread pool, then merges them by sorted key
into one report so that completion order never shows in the output. A rung
that fails is recorded with its error and the other rungs carry on.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..config import ExperimentConfig
from ..enhancement import build_enhancement
from ..exceptions import ConfigurationError, PAMLabError
from ..kernels import DEFAULT_CUTOFF, build_green
from ..lattice import Field, Grid, WeightSpec, make_grid, weighted_sup_norm
from ..solver import (
    SpaceTimeField,
    monitor_norm,
    solve_direct,
    solve_transformed,
    spacetime_norm,
)
from ..stochastics import PROFILE_NAME, sample_white_noise
from ..utils import safe_divide
from .reports import CheckResult, Report, RungRow

logger = logging.getLogger(__name__)

MIN_LADDER = 3
RUNG_TABLE = "rungs"
VERDICT_TABLE = "verdicts"
MONOTONE_CHECK = "convergence_monotone"
GROWTH_CHECK = "unrenormalised_growth"
GROWTH_SLACK = 0.1


def initial_condition(grid: Grid, width: float) -> Field:
    """Default u0: centred Gaussian bump of per-axis standard deviation ``width``."""
    return Field.gaussian(grid, width**2)


def interior_relative_gap(a: Field, b: Field, collar: float) -> float:
    """sup |a − b| / sup |b| over nodes outside the collar."""
    return safe_divide((a - b).sup(collar), b.sup(collar), default=0.0)


def grid_label(grid: Grid) -> str:
    return f"L={grid.L:g},n={grid.n}"


@dataclass
class RungOutcome:
    seed: int
    epsilon: float
    C_eps: Optional[float] = None
    direct: Optional[SpaceTimeField] = None
    solver_gap: Optional[float] = None
    picard_iterations: Optional[int] = None
    error: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.direct is not None and not self.error


def run_rung(
    cfg: ExperimentConfig, grid: Grid, seed: int, epsilon: float, renormalise: bool
) -> RungOutcome:
    """Enhancement, direct solve and (when renormalised) Picard solve of one rung."""
    start = time.perf_counter()
    outcome = RungOutcome(seed=seed, epsilon=epsilon)
    collar = cfg.report.collar
    try:
        xi = sample_white_noise(grid, seed)
        enh = build_enhancement(xi, epsilon)
        outcome.C_eps = enh.C_eps
        u0 = initial_condition(grid, cfg.noise.u0_width)
        C = enh.C_eps if renormalise else 0.0
        outcome.direct = solve_direct(enh.xi_eps, C, u0, cfg.solver)
        if renormalise:
            transformed = solve_transformed(enh, u0, cfg.solver, collar)
            outcome.picard_iterations = transformed.iterations
            outcome.solver_gap = interior_relative_gap(
                transformed.u.final, outcome.direct.final, collar
            )
    except PAMLabError as e:
        outcome.direct = None
        outcome.error = f"{type(e).__name__}: {e}"
        logger.warning(f"Rung seed={seed} ε={epsilon} failed: {outcome.error}")
    outcome.seconds = time.perf_counter() - start
    return outcome


def _distances(
    cfg: ExperimentConfig, grid: Grid, a: RungOutcome, b: RungOutcome
) -> Tuple[float, float]:
    solver = cfg.solver
    collar = cfg.report.collar
    assert a.direct is not None and b.direct is not None
    weight = WeightSpec.exponential(solver.ell + solver.T)
    d_sup = weighted_sup_norm(a.direct.final - b.direct.final, weight, collar)
    d_spacetime = spacetime_norm(
        a.direct - b.direct,
        solver.norm_r,
        solver.ell,
        solver.T,
        solver.kappa,
        collar,
        norm=monitor_norm(solver, grid),
    )
    return d_sup, d_spacetime


def _rows_for_seed(
    cfg: ExperimentConfig, grid: Grid, rungs: List[RungOutcome], renormalise: bool
) -> List[RungRow]:
    """Rows of one seed; ``rungs`` is ordered from coarse to fine ε."""
    collar = cfg.report.collar
    rows: List[RungRow] = []
    previous: Optional[RungOutcome] = None
    previous_sup: Optional[float] = None
    for index, rung in enumerate(rungs):
        following = rungs[index + 1] if index + 1 < len(rungs) else None
        d_sup = d_spacetime = None
        if rung.ok and following is not None and following.ok:
            d_sup, d_spacetime = _distances(cfg, grid, rung, following)
        frame_sup = rung.direct.final.sup(collar) if rung.ok else None
        growth = expected = None
        if frame_sup is not None and previous_sup:
            growth = frame_sup / previous_sup
            if not renormalise and previous is not None and previous.C_eps is not None:
                expected = math.exp((rung.C_eps - previous.C_eps) * cfg.solver.T)
        rows.append(
            RungRow(
                seed=rung.seed,
                epsilon=rung.epsilon,
                grid=grid_label(grid),
                renormalised=renormalise,
                C_eps=rung.C_eps,
                d_sup=d_sup,
                d_spacetime=d_spacetime,
                frame_sup=frame_sup,
                growth=growth,
                expected_growth=expected,
                solver_gap=rung.solver_gap,
                picard_iterations=rung.picard_iterations,
                status="ok" if rung.ok else "failed",
                error=rung.error,
                seconds=rung.seconds,
            )
        )
        previous, previous_sup = rung, frame_sup
    return rows


def seed_verdict(rows: Sequence[RungRow]) -> CheckResult:
    """Acceptance of one seed's ladder, rows ordered from coarse to fine ε.

    Renormalised ladders pass when d(ε) strictly decreases; ``measured`` is the
    largest ratio of successive distances. Unrenormalised ladders pass when the
    frame sup grows by at least ``1 − GROWTH_SLACK`` times exp((C_ε' − C_ε)·T)
    per rung; ``measured`` is the smallest growth relative to that factor.
    """
    first = rows[0]
    name = MONOTONE_CHECK if first.renormalised else GROWTH_CHECK
    columns: Dict[str, object] = {
        "check": name,
        "seed": first.seed,
        "seed_count": 1,
        "epsilon": rows[-1].epsilon,
        "grid": first.grid,
    }
    broken = [row.epsilon for row in rows if row.status != "ok"]
    if broken:
        detail = f"failed rungs at ε={broken}"
        return CheckResult(status="fail", detail=detail, **columns)
    if first.renormalised:
        distances = [row.d_sup for row in rows if row.d_sup is not None]
        pairs = zip(distances, distances[1:])
        ratios = [safe_divide(b, a, default=1.0) for a, b in pairs]
        if not ratios:
            detail = "fewer than two distances"
            return CheckResult(status="fail", detail=detail, **columns)
        measured = max(ratios)
        return CheckResult(
            measured=measured,
            upper=1.0,
            status="pass" if measured < 1.0 else "fail",
            detail="d_sup " + ", ".join(f"{d:.4g}" for d in distances),
            **columns,
        )
    relative = [
        row.growth / row.expected_growth
        for row in rows
        if row.growth is not None and row.expected_growth is not None
    ]
    if not relative:
        return CheckResult(status="fail", detail="no growth factors", **columns)
    measured = min(relative)
    lower = 1.0 - GROWTH_SLACK
    return CheckResult(
        measured=measured,
        lower=lower,
        status="pass" if measured >= lower else "fail",
        detail="growth/expected " + ", ".join(f"{g:.4f}" for g in relative),
        **columns,
    )


def report_manifest(cfg: ExperimentConfig) -> Dict[str, object]:
    """Config echo and the profiles every quantity depends on."""
    manifest: Dict[str, object] = dict(cfg.to_flat_dict())
    manifest.update(
        {
            "mollifier_profile": PROFILE_NAME,
            "cutoff_profile": DEFAULT_CUTOFF.name,
        }
    )
    return manifest


def run_convergence_study(
    cfg: ExperimentConfig, renormalise: bool = True, workers: Optional[int] = None
) -> Report:
    """Solve along the ε ladder for every seed and compare successive rungs.

    Args:
        cfg: Experiment configuration; the ladder needs at least three scales.
        renormalise: Subtract C_ε; False runs the unrenormalised family.
        workers: Thread count; ``report.workers`` by default.

    Returns:
        Report with one ``rungs`` row per (seed, ε) and one ``verdicts`` row
        per seed.

    Raises:
        ConfigurationError: If the ladder is shorter than three.
    """
    ladder = list(cfg.mollifier.eps_ladder)
    if len(ladder) < MIN_LADDER:
        raise ConfigurationError(
            f"convergence study needs at least {MIN_LADDER} ladder scales, "
            f"got {len(ladder)}",
            key="mollifier.eps_ladder",
        )
    grid = make_grid(cfg.grid.L, cfg.grid.n)
    build_green(grid)
    tasks = [(seed, eps) for seed in cfg.noise.seeds for eps in ladder]
    pool_size = workers or cfg.report.workers
    logger.info(
        f"Convergence study {cfg.name}: {len(cfg.noise.seeds)} seeds × "
        f"{len(ladder)} rungs on {grid_label(grid)}, renormalise={renormalise}, "
        f"workers={pool_size}"
    )

    with ThreadPoolExecutor(max_workers=pool_size) as pool:
        futures = {
            key: pool.submit(run_rung, cfg, grid, key[0], key[1], renormalise)
            for key in tasks
        }
        outcomes = {key: future.result() for key, future in futures.items()}

    report = Report(cfg.name, report_manifest(cfg))
    report.manifest["renormalised"] = str(renormalise)
    verdicts: List[CheckResult] = []
    for seed in sorted(set(cfg.noise.seeds)):
        rungs = [outcomes[(seed, eps)] for eps in sorted(ladder, reverse=True)]
        rows = _rows_for_seed(cfg, grid, rungs, renormalise)
        report.add(RUNG_TABLE, rows)
        verdicts.append(seed_verdict(rows))
    report.add(VERDICT_TABLE, verdicts)
    failures = sum(1 for outcome in outcomes.values() if not outcome.ok)
    rejected = [v.seed for v in verdicts if v.status == "fail"]
    logger.info(
        f"Convergence study finished: {len(outcomes)} rungs, {failures} failed, "
        f"seeds failing acceptance: {rejected or 'none'}"
    )
    return report
