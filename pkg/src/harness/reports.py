"""Report Tables and Manifest

Typed report rows validated with pydantic, gathered into named tables and
written as CSV files with a plain-text manifest. Numeric cells are finite or
empty; a row that fails validation never reaches a table.
"""

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Mapping, Optional, Sequence, Type

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .. import __version__
from ..exceptions import ReportError
from ..utils import ensure_directory

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.txt"
TIMING_COLUMNS = ("seconds",)

CheckStatus = Literal["pass", "fail", "low-power"]
RungStatus = Literal["ok", "failed"]


class ReportRow(BaseModel):
    """Base row: NaN and infinities are rejected at construction."""

    model_config = ConfigDict(allow_inf_nan=False, frozen=True)

    code_version: str = Field(default=__version__, description="Package version")


class CheckResult(ReportRow):
    """Outcome of one validation check."""

    check: str = Field(description="Check name")
    seed: Optional[int] = Field(
        None, ge=0, description="Noise seed of a per-seed verdict"
    )
    seed_count: int = Field(ge=0, description="Noise realisations used")
    epsilon: Optional[float] = Field(None, description="Mollifier scale, if any")
    grid: str = Field("", description="Grid of the check as L=…,n=…")
    measured: Optional[float] = Field(None, description="Measured quantity")
    lower: Optional[float] = Field(None, description="Lower acceptance bound")
    upper: Optional[float] = Field(None, description="Upper acceptance bound")
    status: CheckStatus = Field(description="pass, fail or low-power")
    detail: str = Field("", description="Diagnostic message")


class RungRow(ReportRow):
    """One (seed, ε) rung of a convergence study."""

    seed: int = Field(ge=0)
    epsilon: float = Field(gt=0.0)
    grid: str
    renormalised: bool
    C_eps: Optional[float] = Field(None, description="Constant used by the solvers")
    d_sup: Optional[float] = Field(
        None, description="Interior weighted-sup distance to the next rung at T"
    )
    d_spacetime: Optional[float] = Field(
        None, description="Spacetime-norm distance to the next rung"
    )
    frame_sup: Optional[float] = Field(None, description="Interior sup of u(T)")
    growth: Optional[float] = Field(
        None, description="frame_sup relative to the previous rung"
    )
    expected_growth: Optional[float] = Field(
        None, description="exp((C_ε − C_prev)·T) for unrenormalised runs"
    )
    solver_gap: Optional[float] = Field(
        None, description="Interior relative sup gap between the two solvers at T"
    )
    picard_iterations: Optional[int] = Field(None, ge=0)
    status: RungStatus = "ok"
    error: str = ""
    seconds: Optional[float] = Field(None, description="Wall-clock time, informational")


class NormRow(ReportRow):
    """Norms and regularity estimate of one field."""

    field: str
    seed: Optional[int] = Field(None, ge=0)
    grid: str
    weighted_sup: float = Field(ge=0.0)
    alpha: float = Field(description="Exponent of the negative Hölder norm")
    neg_holder: float = Field(ge=0.0)
    alpha_hat: Optional[float] = Field(None, description="Fitted regularity")


class LevelRecord(ReportRow):
    """Weighted sup of one wavelet level of a field."""

    field: str
    seed: Optional[int] = Field(None, ge=0)
    level: int = Field(ge=0)
    sup_coeff: float = Field(ge=0.0)
    weight_at_argmax: float = Field(gt=0.0)


class Report:
    """Named CSV tables plus a ``key = value`` manifest."""

    def __init__(self, name: str, manifest: Optional[Mapping[str, object]] = None):
        self.name = name
        self.tables: Dict[str, List[ReportRow]] = {}
        self.manifest: Dict[str, str] = {"experiment": name, "code_version": __version__}
        for key, value in (manifest or {}).items():
            self.manifest[key] = str(value)

    def add(self, table: str, rows: Iterable[ReportRow]) -> None:
        """Append rows to a table, creating it on first use.

        Raises:
            ReportError: If a numeric cell is not finite or the row types differ.
        """
        bucket = self.tables.setdefault(table, [])
        for row in rows:
            if bucket and type(row) is not type(bucket[0]):
                raise ReportError(
                    f"table {table} mixes {type(bucket[0]).__name__} and "
                    f"{type(row).__name__} rows"
                )
            for column, value in row.model_dump().items():
                if isinstance(value, float) and not math.isfinite(value):
                    raise ReportError(
                        f"non-finite cell {column}={value} in table {table}",
                        details={"table": table, "column": column},
                    )
            bucket.append(row)

    def add_row(self, table: str, model: Type[ReportRow], **values: object) -> ReportRow:
        """Validate ``values`` as a ``model`` row and append it."""
        try:
            row = model(**values)
        except ValidationError as e:
            raise ReportError(f"invalid {model.__name__} row for {table}: {e}") from e
        self.add(table, [row])
        return row

    def frame(self, table: str) -> pd.DataFrame:
        rows = self.tables.get(table)
        if rows is None:
            raise ReportError(f"report {self.name} has no table {table}")
        columns = list(type(rows[0]).model_fields) if rows else []
        return pd.DataFrame([row.model_dump() for row in rows], columns=columns)

    def rows(self, table: str) -> Sequence[ReportRow]:
        return tuple(self.tables.get(table, ()))

    @property
    def failed(self) -> bool:
        """Whether any check or verdict failed, or any rung errored."""
        for rows in self.tables.values():
            for row in rows:
                if isinstance(row, CheckResult) and row.status == "fail":
                    return True
                if isinstance(row, RungRow) and row.status == "failed":
                    return True
        return False

    def write(self, out_dir: str) -> Path:
        """Write ``<table>.csv`` per table and ``manifest.txt``.

        Raises:
            ReportError: If the directory cannot be written.
        """
        try:
            root = ensure_directory(out_dir)
            for table in sorted(self.tables):
                self.frame(table).to_csv(
                    root / f"{table}.csv", index=False, float_format="%.12g"
                )
            lines = [f"{key} = {value}" for key, value in sorted(self.manifest.items())]
            (root / MANIFEST_NAME).write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as e:
            raise ReportError(f"cannot write report to {out_dir}: {e}") from e
        logger.info(f"Report {self.name} written to {root} ({len(self.tables)} tables)")
        return root
