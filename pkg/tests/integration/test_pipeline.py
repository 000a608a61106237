"""Integration tests across noise, enhancement, solvers and the harness.

These run at desk scale but take seconds each; select them with
``pytest -m integration``.
"""

import math

import pandas as pd
import pytest

from src.config import SolveConfig, ValidationConfig
from src.enhancement import build_enhancement
from src.harness.cli import EXIT_FAILURE, EXIT_OK, main
from src.harness.experiments import (
    GROWTH_CHECK,
    MONOTONE_CHECK,
    initial_condition,
    run_convergence_study,
)
from src.harness import validation
from src.harness.validation import run_validation
from src.lattice import make_grid
from src.solver import feynman_kac, solve_direct, solve_transformed
from src.stochastics import sample_white_noise


def statuses(report):
    return {row.check: row.status for row in report.rows("checks")}


@pytest.fixture(scope="function")
def powered_config(small_config):
    """Small configuration whose Monte Carlo checks are not low-power."""
    small_config.validation = ValidationConfig(
        mc_samples_per_seed=100, min_power_samples=100
    )
    return small_config


@pytest.fixture(scope="module")
def enhancement():
    grid = make_grid(2.0, 128)
    return build_enhancement(sample_white_noise(grid, 5), 0.125)


class TestSolverAgreement:
    """The three solvers describe the same mollified equation."""

    def test_transformed_matches_direct_slow(self, enhancement):
        cfg = SolveConfig(T=0.05, dt=1e-3, frame_stride=25, picard_max_iter=60)
        u0 = initial_condition(enhancement.grid, 0.5)

        direct = solve_direct(enhancement.xi_eps, enhancement.C_eps, u0, cfg)
        transformed = solve_transformed(enhancement, u0, cfg, collar=0.5)

        gap = (transformed.u.final - direct.final).sup(0.5) / direct.final.sup(0.5)
        assert gap < 0.05
        assert transformed.iterations <= 60

    def test_feynman_kac_matches_direct_slow(self):
        grid = make_grid(2.0, 128)
        enh = build_enhancement(sample_white_noise(grid, 9), 0.25)
        u0 = initial_condition(grid, 0.5)
        cfg = SolveConfig(T=0.05, dt=1e-3)

        direct = solve_direct(enh.xi_eps, enh.C_eps, u0, cfg)
        value = direct.final.value_at((0.0, 0.0))
        estimate = feynman_kac(
            enh.xi_eps, enh.C_eps, u0, 0.05, (0.0, 0.0), walkers=20000, dt_walk=1e-3
        )

        assert abs(estimate.mean - value) <= 5.0 * estimate.stderr + 0.02 * value
        assert estimate.exits == 0


class TestConvergenceStudy:
    """Rungs of the ε ladder."""

    def test_renormalised_ladder_slow(self, small_config):
        report = run_convergence_study(small_config)
        rows = report.rows("rungs")

        assert [(r.seed, r.epsilon) for r in rows] == [
            (1, 0.5),
            (1, 0.25),
            (1, 0.125),
            (2, 0.5),
            (2, 0.25),
            (2, 0.125),
        ]
        assert all(r.status == "ok" for r in rows)
        assert all(r.picard_iterations >= 1 for r in rows)
        assert all(r.solver_gap is not None for r in rows)
        assert rows[2].d_sup is None and rows[5].d_sup is None
        assert rows[0].d_sup > 0.0
        assert all(r.expected_growth is None for r in rows)
        verdicts = report.rows("verdicts")
        assert [(v.check, v.seed) for v in verdicts] == [
            (MONOTONE_CHECK, 1),
            (MONOTONE_CHECK, 2),
        ]
        assert verdicts[0].measured == pytest.approx(rows[1].d_sup / rows[0].d_sup)
        assert report.failed == any(v.status == "fail" for v in verdicts)

    def test_unrenormalised_ladder_slow(self, small_config):
        report = run_convergence_study(small_config, renormalise=False)
        rows = report.rows("rungs")

        assert all(r.picard_iterations is None for r in rows)
        assert rows[0].expected_growth is None
        for previous, row in zip(rows[:2], rows[1:3]):
            expected = math.exp((row.C_eps - previous.C_eps) * small_config.solver.T)
            assert row.expected_growth == pytest.approx(expected)
            assert row.growth is not None
        assert report.manifest["renormalised"] == "False"
        assert {v.check for v in report.rows("verdicts")} == {GROWTH_CHECK}

    def test_thread_count_does_not_change_results_slow(self, small_config):
        small_config.noise.seeds = [3]
        serial = run_convergence_study(small_config, renormalise=False, workers=1)
        pooled = run_convergence_study(small_config, renormalise=False, workers=3)

        assert [r.d_sup for r in serial.rows("rungs")] == [
            r.d_sup for r in pooled.rows("rungs")
        ]


class TestValidationChecks:
    """Deterministic checks of the suite."""

    def test_renormalisation_identity_slow(self, small_config):
        report = run_validation(small_config, checks=["renormalisation_identity"])

        assert [row.status for row in report.rows("checks")] == ["pass"]

    def test_kernel_checks_slow(self, small_config):
        checks = [
            "kernel_stability",
            "kernel_product_bound",
            "kernel_convolution_bound",
        ]
        report = run_validation(small_config, checks=checks)

        assert statuses(report) == {
            "kernel_stability": "pass",
            "kernel_stability_uniform": "pass",
            "kernel_product_bound": "pass",
            "kernel_convolution_bound": "pass",
        }

    def test_fk_agreement_slow(self, small_config):
        report = run_validation(small_config, checks=["fk_agreement"])

        assert statuses(report) == {"fk_agreement": "pass"}

    def test_transform_consistency_slow(self, small_config, monkeypatch):
        monkeypatch.setattr(validation, "TRANSFORM_GRID", (2.0, 128))
        monkeypatch.setattr(validation, "TRANSFORM_EPSILON", 0.125)
        report = run_validation(small_config, checks=["transform_consistency"])

        rows = {row.check: row for row in report.rows("checks")}
        assert set(rows) == {
            "transform_consistency",
            "transform_time_refinement",
            "transform_space_refinement",
        }
        assert rows["transform_consistency"].status == "pass"
        for name in ("transform_time_refinement", "transform_space_refinement"):
            assert (rows[name].status == "pass") == (rows[name].measured < 1.0)


class TestStatisticalChecks:
    """Monte Carlo checks with enough samples to pass or fail."""

    def test_chaos_checks_slow(self, powered_config):
        checks = ["c_epsilon_monte_carlo", "z_covariance", "z_mean_centering"]
        report = run_validation(powered_config, checks=checks)

        assert statuses(report) == dict.fromkeys(checks, "pass")
        assert report.manifest["low_power"] == "False"

    def test_shifted_quadrature_is_caught_slow(self, powered_config, monkeypatch):
        exact = validation.c_epsilon_quadrature
        monkeypatch.setattr(
            validation,
            "c_epsilon_quadrature",
            lambda epsilon, grid: 2.0 * exact(epsilon, grid),
        )
        report = run_validation(powered_config, checks=["c_epsilon_monte_carlo"])

        assert statuses(report) == {"c_epsilon_monte_carlo": "fail"}
        assert report.failed

    def test_smoothing_slope_slow(self, powered_config):
        report = run_validation(powered_config, checks=["smoothing_slope"])

        assert statuses(report) == {"smoothing_slope": "pass"}

    def test_young_constant_slow(self, powered_config, monkeypatch):
        monkeypatch.setattr(validation, "YOUNG_PAIRS", 10)
        report = run_validation(powered_config, checks=["young_constant"])

        assert statuses(report) == {"young_constant": "pass"}

    def test_regularity_ladder_slow(self, powered_config, monkeypatch):
        monkeypatch.setattr(validation, "REGULARITY_SAMPLES", 4)
        report = run_validation(powered_config, checks=["regularity_ladder"])

        assert statuses(report) == {
            "regularity_white_noise": "pass",
            "regularity_Y_gain": "pass",
            "regularity_gradient_gain": "pass",
        }


class TestCommandLine:
    """End-to-end runs of the command line."""

    def test_converge_slow(self, isolated_cwd, config_file):
        out = isolated_cwd / "study"
        code = main(["converge", "--config", str(config_file), "--out", str(out)])

        rungs = pd.read_csv(out / "rungs.csv")
        verdicts = pd.read_csv(out / "verdicts.csv")
        rejected = (verdicts["status"] == "fail").any()
        assert code == (EXIT_FAILURE if rejected else EXIT_OK)
        assert list(verdicts["seed"]) == [1, 2]
        assert len(rungs) == 6
        assert set(rungs["status"]) == {"ok"}
        manifest = (out / "manifest.txt").read_text(encoding="utf-8")
        assert "mollifier.eps_ladder = 0.5, 0.25, 0.125" in manifest

    def test_solve_transformed_slow(self, isolated_cwd, config_file):
        out = isolated_cwd / "solve"
        code = main(
            ["solve", "--config", str(config_file), "--out", str(out), "--transformed"]
        )

        assert code == EXIT_OK
        assert (out / "transformed" / "frame_0001.pamf").is_file()

    def test_unrenormalised_solve_slow(self, isolated_cwd, config_file):
        out = isolated_cwd / "bare"
        argv = ["solve", "--config", str(config_file), "--out", str(out)]
        code = main(argv + ["--no-renormalise"])

        assert code == EXIT_OK
        assert (out / "direct" / "manifest.txt").is_file()

