"""Unit tests for report tables and the convergence-study helpers."""

from unittest.mock import patch

import pandas as pd
import pytest

from src import __version__
from src.config import ExperimentConfig
from src.exceptions import ConfigurationError, ReportError
from src.harness.experiments import (
    GROWTH_CHECK,
    MONOTONE_CHECK,
    grid_label,
    initial_condition,
    interior_relative_gap,
    report_manifest,
    run_convergence_study,
    seed_verdict,
)
from src.harness.reports import (
    MANIFEST_NAME,
    CheckResult,
    LevelRecord,
    NormRow,
    Report,
    RungRow,
)
from src.lattice import Field, make_grid


def passing_check(**overrides):
    values = dict(check="demo", seed_count=1, status="pass", measured=0.5)
    values.update(overrides)
    return CheckResult(**values)


class TestReportRows:
    """Test row validation."""

    def test_rows_carry_version(self):
        assert passing_check().code_version == __version__

    @patch("src.exceptions.logger")
    def test_nan_is_rejected(self, mock_logger):
        report = Report("demo")

        with pytest.raises(ReportError):
            report.add_row(
                "checks",
                CheckResult,
                check="demo",
                seed_count=1,
                status="pass",
                measured=float("nan"),
            )
        assert report.rows("checks") == ()

    @patch("src.exceptions.logger")
    def test_unknown_status_is_rejected(self, mock_logger):
        with pytest.raises(ReportError):
            Report("demo").add_row(
                "checks", CheckResult, check="demo", seed_count=1, status="maybe"
            )

    @patch("src.exceptions.logger")
    def test_unvalidated_infinity_is_rejected(self, mock_logger):
        row = CheckResult.model_construct(
            check="demo", seed_count=1, status="pass", measured=float("inf")
        )

        with pytest.raises(ReportError):
            Report("demo").add("checks", [row])

    @patch("src.exceptions.logger")
    def test_tables_hold_one_row_type(self, mock_logger):
        report = Report("demo")
        report.add("checks", [passing_check()])
        level = LevelRecord(field="xi", level=0, sup_coeff=1.0, weight_at_argmax=1.0)

        with pytest.raises(ReportError):
            report.add("checks", [level])


class TestReport:
    """Test report status and output."""

    def test_failed_flag(self):
        report = Report("demo")
        report.add("checks", [passing_check(), passing_check(status="low-power")])
        assert not report.failed

        report.add("checks", [passing_check(status="fail")])
        assert report.failed

    def test_failed_rung(self):
        report = Report("demo")
        report.add(
            "rungs",
            [
                RungRow(
                    seed=1,
                    epsilon=0.25,
                    grid="L=2,n=64",
                    renormalised=True,
                    status="failed",
                    error="boom",
                )
            ],
        )

        assert report.failed

    @patch("src.exceptions.logger")
    def test_unknown_table(self, mock_logger):
        with pytest.raises(ReportError):
            Report("demo").frame("missing")

    def test_write(self, tmp_path):
        report = Report("demo", {"grid.n": 64})
        report.add("checks", [passing_check(), passing_check(check="other")])
        report.add_row(
            "norms",
            NormRow,
            field="xi",
            seed=None,
            grid="L=1,n=64",
            weighted_sup=2.0,
            alpha=-1.1,
            neg_holder=0.3,
        )

        root = report.write(str(tmp_path / "out"))

        checks = pd.read_csv(root / "checks.csv")
        assert list(checks["check"]) == ["demo", "other"]
        assert "code_version" in checks.columns
        norms = pd.read_csv(root / "norms.csv")
        assert norms["alpha_hat"].isna().all()
        manifest = (root / MANIFEST_NAME).read_text(encoding="utf-8")
        assert f"code_version = {__version__}" in manifest
        assert "grid.n = 64" in manifest
        assert "experiment = demo" in manifest


class TestExperimentHelpers:
    """Test the convergence-study helpers."""

    def test_grid_label(self):
        assert grid_label(make_grid(2.0, 64)) == "L=2,n=64"

    def test_initial_condition_mass(self):
        grid = make_grid(4.0, 128)
        u0 = initial_condition(grid, 0.5)

        assert u0.values.sum() * grid.spacing**2 == pytest.approx(1.0, abs=1e-6)

    def test_interior_relative_gap(self, small_grid):
        a = Field.constant(small_grid, 1.1)
        b = Field.constant(small_grid, 1.0)

        assert interior_relative_gap(a, b, 0.25) == pytest.approx(0.1)
        assert interior_relative_gap(a, Field.zeros(small_grid), 0.25) == 0.0

    def test_manifest_names_profiles(self, small_config):
        manifest = report_manifest(small_config)

        assert "mollifier_profile" in manifest
        assert "cutoff_profile" in manifest
        assert manifest["grid.n"] == "64"

    @patch("src.exceptions.logger")
    def test_ladder_too_short(self, mock_logger):
        cfg = ExperimentConfig(name="short")
        cfg.mollifier.eps_ladder = [0.5, 0.25]

        with pytest.raises(ConfigurationError) as exc_info:
            run_convergence_study(cfg)

        assert exc_info.value.key == "mollifier.eps_ladder"


def rung(epsilon, **values):
    row = dict(seed=4, epsilon=epsilon, grid="L=2,n=64", renormalised=True)
    row.update(values)
    return RungRow(**row)


class TestSeedVerdict:
    """Test the per-seed acceptance of a convergence ladder."""

    def test_decreasing_distances_pass(self):
        rows = [rung(0.5, d_sup=1.0), rung(0.25, d_sup=0.4), rung(0.125)]

        verdict = seed_verdict(rows)

        assert verdict.check == MONOTONE_CHECK
        assert verdict.status == "pass"
        assert verdict.seed == 4
        assert verdict.measured == pytest.approx(0.4)
        assert verdict.upper == 1.0

    def test_growing_distances_fail(self):
        rows = [rung(0.5, d_sup=1.0), rung(0.25, d_sup=5.0), rung(0.125)]
        report = Report("demo")
        report.add("rungs", rows)
        assert not report.failed

        report.add("verdicts", [seed_verdict(rows)])

        assert report.rows("verdicts")[0].status == "fail"
        assert report.failed

    def test_equal_distances_fail(self):
        rows = [rung(0.5, d_sup=0.0), rung(0.25, d_sup=0.0), rung(0.125)]

        assert seed_verdict(rows).status == "fail"

    def test_failed_rung_fails_seed(self):
        rows = [rung(0.5, d_sup=1.0), rung(0.25, status="failed"), rung(0.125)]

        verdict = seed_verdict(rows)

        assert verdict.status == "fail"
        assert "0.25" in verdict.detail

    def test_unrenormalised_growth(self):
        bare = dict(renormalised=False)
        rows = [
            rung(0.5, **bare),
            rung(0.25, growth=1.05, expected_growth=1.1, **bare),
            rung(0.125, growth=1.2, expected_growth=1.1, **bare),
        ]

        verdict = seed_verdict(rows)

        assert verdict.check == GROWTH_CHECK
        assert verdict.status == "pass"
        assert verdict.measured == pytest.approx(1.05 / 1.1)

    def test_unrenormalised_growth_too_small(self):
        bare = dict(renormalised=False)
        rows = [
            rung(0.5, **bare),
            rung(0.25, growth=0.8, expected_growth=1.1, **bare),
            rung(0.125, growth=1.1, expected_growth=1.1, **bare),
        ]

        assert seed_verdict(rows).status == "fail"
