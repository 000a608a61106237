"""Experiment Harness

Convergence studies, the validation suite, CSV reporting and the command
line.
"""

from ..config import parse_config
from .cli import COMMANDS, build_parser, main
from .experiments import initial_condition, run_convergence_study
from .reports import CheckResult, LevelRecord, NormRow, Report, RungRow
from .validation import CHECKS, ValidationContext, run_validation

__all__ = [
    "CHECKS",
    "COMMANDS",
    "CheckResult",
    "LevelRecord",
    "NormRow",
    "Report",
    "RungRow",
    "ValidationContext",
    "build_parser",
    "initial_condition",
    "main",
    "parse_config",
    "run_convergence_study",
    "run_validation",
]
