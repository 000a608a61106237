"""Unit tests for the validation suite."""

from unittest.mock import patch

import pytest

from src.exceptions import ConfigurationError
from src.harness import validation
from src.harness.validation import (
    CHECKS,
    SEED_STRIDE,
    ValidationContext,
    run_validation,
)
from src.kernels import QuinticCutoff


def statuses(report):
    return {row.check: row.status for row in report.rows("checks")}


class TestValidationContext:
    """Test seed bookkeeping and the low-power rule."""

    def test_sample_seeds_interleave(self, small_config):
        ctx = ValidationContext(small_config)

        assert ctx.sample_seeds(4) == [
            1 * SEED_STRIDE,
            2 * SEED_STRIDE,
            1 * SEED_STRIDE + 1,
            2 * SEED_STRIDE + 1,
        ]
        assert len(ctx.sample_seeds()) == ctx.total_samples == 800

    def test_low_power(self, small_config):
        assert ValidationContext(small_config).low_power

        small_config.noise.seeds = [1, 2, 3]
        assert not ValidationContext(small_config).low_power

    def test_solve_config(self, small_config):
        cfg = ValidationContext(small_config).solve_config(0.1)

        assert cfg.T == 0.1
        assert cfg.dt == small_config.solver.dt


class TestRunValidation:
    """Test check selection, fault injection and status rules."""

    def test_registry(self):
        assert "weight_transfer" in CHECKS
        assert "green_kernel" in CHECKS
        assert len(CHECKS) == 17

    @patch("src.exceptions.logger")
    def test_unknown_check(self, mock_logger, small_config):
        with pytest.raises(ConfigurationError) as exc_info:
            run_validation(small_config, checks=["no_such_check"])

        assert exc_info.value.key == "checks"

    def test_weight_transfer(self, small_config):
        report = run_validation(small_config, checks=["weight_transfer"])

        assert statuses(report) == {"weight_transfer": "pass"}
        assert not report.failed
        assert report.manifest["low_power"] == "True"

    def test_broken_cutoff_is_caught(self, small_config):
        broken = QuinticCutoff(0.25, 1.0)
        report = run_validation(
            small_config, checks=["green_kernel", "weight_transfer"], cutoff=broken
        )

        assert statuses(report) == {"green_kernel": "fail", "weight_transfer": "pass"}
        assert report.failed
        assert "0.25" in report.manifest["cutoff_profile"]

    def test_raising_check_becomes_failure(self, small_config, monkeypatch):
        def explode(ctx):
            raise RuntimeError("boom")

        monkeypatch.setitem(validation.CHECKS, "weight_transfer", explode)
        report = run_validation(small_config, checks=["weight_transfer"])

        (row,) = report.rows("checks")
        assert row.status == "fail"
        assert "RuntimeError: boom" in row.detail
        assert report.failed

    def test_isometry_with_few_seeds_is_low_power(self, small_config):
        small_config.noise.seeds = [1]
        report = run_validation(small_config, checks=["white_noise_isometry"])

        (row,) = report.rows("checks")
        assert row.status == "low-power"
        assert row.seed_count == 200
        assert not report.failed

    def test_isometry(self, small_config):
        small_config.noise.seeds = [1, 2, 3, 4, 5]
        report = run_validation(small_config, checks=["white_noise_isometry"])

        (row,) = report.rows("checks")
        assert row.status == "pass"
        assert row.measured < 0.05

    @pytest.mark.parametrize(
        "gaps, expected",
        [
            ({(64, 1e-3): 1e-4, (64, 2e-3): 4e-4, (32, 1e-3): 3e-4}, "pass"),
            ({(64, 1e-3): 1e-4, (64, 2e-3): 1e-4, (32, 1e-3): 5e-5}, "fail"),
        ],
    )
    def test_transform_refinement_rows(self, small_config, monkeypatch, gaps, expected):
        monkeypatch.setattr(validation, "TRANSFORM_GRID", (2.0, 64))
        monkeypatch.setattr(
            validation,
            "_transform_gap",
            lambda ctx, noise, dt: gaps[(noise.grid.n, round(dt, 6))],
        )
        report = run_validation(small_config, checks=["transform_consistency"])

        rows = {row.check: row for row in report.rows("checks")}
        assert rows["transform_consistency"].status == "pass"
        assert rows["transform_time_refinement"].status == expected
        assert rows["transform_space_refinement"].status == expected
        assert rows["transform_time_refinement"].measured == pytest.approx(
            gaps[(64, 1e-3)] / gaps[(64, 2e-3)]
        )
        assert report.failed == (expected == "fail")

    def test_kernel_product_bound(self, small_config):
        report = run_validation(small_config, checks=["kernel_product_bound"])

        (row,) = report.rows("checks")
        assert row.status == "pass"
        assert row.measured <= 1.0 + 1e-12
