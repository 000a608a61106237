"""Configuration Management System

Provides dataclass-based configuration for experiments with validation,
environment variable support for the logging setup, and several loading
strategies: the flat ``section.key = value`` document, YAML files and
plain dictionaries.
"""

import io
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import yaml
from dotenv import dotenv_values, load_dotenv

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

MESH_TOLERANCE = 1e-12


@dataclass
class GridConfig:
    """Configuration of the square lattice on [-L, L]²."""

    L: float = 8.0
    n: int = 512

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / self.n


@dataclass
class NoiseConfig:
    """Seeds of the white-noise realisations and the initial bump width."""

    seeds: List[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    u0_width: float = 0.5


@dataclass
class MollifierConfig:
    """Dyadic ladder of mollification scales, strictly decreasing."""

    eps_ladder: List[float] = field(default_factory=lambda: [0.25, 0.125, 0.0625])


@dataclass
class SolveConfig:
    """Time stepping and fixed-point parameters shared by both solvers.

    ``a`` must lie in (0, κ/2); the blow-up weight t^{1-κ} of the spacetime
    norm and the polynomial weight p_a are tied together through this
    constraint.
    """

    T: float = 0.2
    dt: float = 1e-3
    kappa: float = 0.1
    a: float = 0.04
    ell: float = 0.0
    picard_tol: float = 1e-8
    picard_max_iter: int = 50
    frame_stride: int = 10
    norm_r: float = 0.5
    picard_norm: str = "auto"
    quadrature: str = "left-point"

    def __post_init__(self):
        """Validate solver parameters after initialization."""
        if not (0.0 < self.kappa < 0.5):
            raise ConfigurationError(
                f"solver.kappa must lie in (0, 1/2), got {self.kappa}",
                key="solver.kappa",
            )
        if not (0.0 < self.a < self.kappa / 2.0):
            raise ConfigurationError(
                f"a must be < κ/2 and positive (got a={self.a}, κ={self.kappa})",
                key="solver.a",
            )
        if self.dt <= 0.0:
            raise ConfigurationError("solver.dt must be positive", key="solver.dt")
        if self.T < self.dt:
            raise ConfigurationError(
                f"solver.T must be at least dt (got T={self.T}, dt={self.dt})",
                key="solver.T",
            )
        if abs(self.steps * self.dt - self.T) > MESH_TOLERANCE:
            raise ConfigurationError(
                f"solver.T must be a whole number of steps dt "
                f"(got T={self.T}, dt={self.dt})",
                key="solver.T",
            )
        if self.picard_tol <= 0.0:
            raise ConfigurationError(
                "solver.picard_tol must be positive", key="solver.picard_tol"
            )
        if self.picard_max_iter < 1:
            raise ConfigurationError(
                "solver.picard_max_iter must be at least 1", key="solver.picard_max_iter"
            )
        if self.frame_stride < 1:
            raise ConfigurationError(
                "solver.frame_stride must be at least 1", key="solver.frame_stride"
            )
        if not (0.0 < self.norm_r < 2.0) or self.norm_r == 1.0:
            raise ConfigurationError(
                "solver.norm_r must lie in (0,1)∪(1,2)", key="solver.norm_r"
            )
        if self.picard_norm not in ("auto", "holder", "sup"):
            raise ConfigurationError(
                "solver.picard_norm must be one of auto, holder, sup",
                key="solver.picard_norm",
            )
        if self.quadrature != "left-point":
            raise ConfigurationError(
                "only left-point Duhamel quadrature is implemented",
                key="solver.quadrature",
            )

    @property
    def steps(self) -> int:
        """Number of time steps needed to reach T."""
        return int(round(self.T / self.dt))


@dataclass
class FeynmanKacConfig:
    """Monte Carlo walker count and path time step."""

    walkers: int = 100_000
    dt: float = 1e-3


@dataclass
class ReportConfig:
    """Report output settings."""

    collar: float = 1.0
    out_dir: str = "reports"
    workers: int = 1


@dataclass
class ValidationConfig:
    """Sample sizes of the statistical checks.

    Each configured seed contributes ``mc_samples_per_seed`` Monte Carlo
    samples; below ``min_power_samples`` in total a check is low-power.
    """

    mc_samples_per_seed: int = 400
    min_power_samples: int = 1000


@dataclass
class ExperimentConfig:
    """Main experiment configuration."""

    name: str = "pam"
    log_level: str = field(
        default_factory=lambda: os.getenv("PAMLAB_LOG_LEVEL", "INFO")
    )
    environment: str = field(
        default_factory=lambda: os.getenv("PAMLAB_ENVIRONMENT", "development")
    )

    grid: GridConfig = field(default_factory=GridConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    mollifier: MollifierConfig = field(default_factory=MollifierConfig)
    solver: SolveConfig = field(default_factory=SolveConfig)
    fk: FeynmanKacConfig = field(default_factory=FeynmanKacConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    validation: ValidationConfig = field(default_factory=ValidationConfig)

    def __post_init__(self):
        """Validate configuration after initialization."""
        self._validate_config()

    def _validate_config(self):
        """Validate cross-section constraints."""
        L, n = self.grid.L, self.grid.n
        if not L >= 1.0:
            raise ConfigurationError(f"grid.L must be at least 1, got {L}", key="grid.L")
        if n < 8 or n & (n - 1) != 0:
            raise ConfigurationError(
                f"grid.n must be a power of two ≥ 8, got {n}", key="grid.n"
            )

        ladder = self.mollifier.eps_ladder
        if not ladder:
            raise ConfigurationError(
                "mollifier.eps_ladder must not be empty", key="mollifier.eps_ladder"
            )
        if any(eps <= 0.0 for eps in ladder):
            raise ConfigurationError(
                "mollifier.eps_ladder entries must be positive",
                key="mollifier.eps_ladder",
            )
        if any(b >= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigurationError(
                "mollifier.eps_ladder must be strictly decreasing",
                key="mollifier.eps_ladder",
            )
        h = self.grid.spacing
        if min(ladder) < 2.0 * h:
            raise ConfigurationError(
                f"mollifier under-resolved: ε={min(ladder)} < 2h={2.0 * h}",
                key="mollifier.eps_ladder",
            )

        if not self.noise.seeds:
            raise ConfigurationError("noise.seeds must not be empty", key="noise.seeds")
        if any(seed < 0 for seed in self.noise.seeds):
            raise ConfigurationError(
                "noise.seeds must be non-negative", key="noise.seeds"
            )
        if self.noise.u0_width <= 0.0:
            raise ConfigurationError(
                "noise.u0_width must be positive", key="noise.u0_width"
            )

        if self.fk.walkers <= 0:
            raise ConfigurationError("fk.walkers must be positive", key="fk.walkers")
        if self.fk.dt <= 0.0:
            raise ConfigurationError("fk.dt must be positive", key="fk.dt")

        if self.report.collar < 0.0 or self.report.collar >= L:
            raise ConfigurationError(
                f"report.collar must lie in [0, L), got {self.report.collar}",
                key="report.collar",
            )
        if self.report.workers < 1:
            raise ConfigurationError(
                "report.workers must be at least 1", key="report.workers"
            )
        if self.validation.mc_samples_per_seed < 2:
            raise ConfigurationError(
                "validation.mc_samples_per_seed must be at least 2",
                key="validation.mc_samples_per_seed",
            )

    def to_flat_dict(self) -> Dict[str, str]:
        """Echo every configuration key with its effective value."""
        echo: Dict[str, str] = {}
        for key, (section, attr, _) in CONFIG_KEYS.items():
            target = self if section is None else getattr(self, section)
            value = getattr(target, attr)
            if isinstance(value, list):
                value = ", ".join(repr(v) for v in value)
            echo[key] = str(value)
        return echo


def _parse_real(text: str) -> float:
    """Parse a real number, accepting dyadic shorthand such as ``2^-3``."""
    text = text.strip()
    if "^" in text:
        base, exponent = text.split("^", 1)
        try:
            value = float(base) ** float(exponent)
        except OverflowError as e:
            raise ValueError(f"value {text!r} overflows") from e
        if isinstance(value, complex):
            raise ValueError(f"value {text!r} is not real")
    else:
        value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _parse_real_list(text: str) -> List[float]:
    return [_parse_real(token) for token in text.split(",") if token.strip()]


def _parse_int_list(text: str) -> List[int]:
    return [int(token) for token in text.split(",") if token.strip()]


def _parse_int(text: str) -> int:
    return int(str(text).strip().replace("_", ""))


# dotted key -> (section attribute or None, field name, parser)
CONFIG_KEYS: Dict[str, Tuple[Optional[str], str, Callable[[str], Any]]] = {
    "experiment.name": (None, "name", str),
    "log.level": (None, "log_level", str),
    "log.environment": (None, "environment", str),
    "grid.L": ("grid", "L", _parse_real),
    "grid.n": ("grid", "n", _parse_int),
    "noise.seeds": ("noise", "seeds", _parse_int_list),
    "noise.u0_width": ("noise", "u0_width", _parse_real),
    "mollifier.eps_ladder": ("mollifier", "eps_ladder", _parse_real_list),
    "solver.kappa": ("solver", "kappa", _parse_real),
    "solver.a": ("solver", "a", _parse_real),
    "solver.ell": ("solver", "ell", _parse_real),
    "solver.T": ("solver", "T", _parse_real),
    "solver.dt": ("solver", "dt", _parse_real),
    "solver.picard_tol": ("solver", "picard_tol", _parse_real),
    "solver.picard_max_iter": ("solver", "picard_max_iter", _parse_int),
    "solver.frame_stride": ("solver", "frame_stride", _parse_int),
    "solver.norm_r": ("solver", "norm_r", _parse_real),
    "solver.picard_norm": ("solver", "picard_norm", str),
    "fk.walkers": ("fk", "walkers", _parse_int),
    "fk.dt": ("fk", "dt", _parse_real),
    "report.collar": ("report", "collar", _parse_real),
    "report.out_dir": ("report", "out_dir", str),
    "report.workers": ("report", "workers", _parse_int),
    "validation.mc_samples_per_seed": ("validation", "mc_samples_per_seed", _parse_int),
    "validation.min_power_samples": ("validation", "min_power_samples", _parse_int),
}

_SECTION_TYPES = {
    "grid": GridConfig,
    "noise": NoiseConfig,
    "mollifier": MollifierConfig,
    "solver": SolveConfig,
    "fk": FeynmanKacConfig,
    "report": ReportConfig,
    "validation": ValidationConfig,
}


def _flatten(mapping: Mapping[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Flatten nested mappings into dotted keys."""
    flat: Dict[str, Any] = {}
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(_flatten(value, prefix=f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def _coerce(raw: Any, parser: Callable[[str], Any]) -> Any:
    """Run the key parser on document text, accepting already-typed YAML values."""
    if isinstance(raw, list):
        return parser(", ".join(str(item) for item in raw))
    return parser(str(raw))


class ConfigFactory:
    """Factory for creating configuration instances with different loading strategies."""

    @staticmethod
    def load_from_flat(entries: Mapping[str, Any]) -> ExperimentConfig:
        """Build a validated configuration from dotted keys.

        Args:
            entries: Mapping of dotted keys to raw values.

        Returns:
            Configured ExperimentConfig instance.

        Raises:
            ConfigurationError: On unknown keys, unparsable values or
                violated constraints.
        """
        sections: Dict[str, Dict[str, Any]] = {name: {} for name in _SECTION_TYPES}
        top: Dict[str, Any] = {}

        for key, raw in entries.items():
            if key not in CONFIG_KEYS:
                raise ConfigurationError(f"unknown configuration key: {key}", key=key)
            if raw is None or (isinstance(raw, str) and not raw.strip()):
                raise ConfigurationError(f"missing value for key: {key}", key=key)
            section, attr, parser = CONFIG_KEYS[key]
            try:
                value = _coerce(raw, parser)
            except (TypeError, ValueError) as e:
                raise ConfigurationError(
                    f"invalid value for {key}: {raw!r} ({e})", key=key
                ) from e
            if section is None:
                top[attr] = value
            else:
                sections[section][attr] = value

        built = {name: _SECTION_TYPES[name](**values) for name, values in sections.items()}
        config = ExperimentConfig(**top, **built)
        logger.debug(f"Configuration built from {len(entries)} keys")
        return config

    @staticmethod
    def load_from_text(text: str) -> ExperimentConfig:
        """Load configuration from a flat ``section.key = value`` document.

        Args:
            text: UTF-8 document; ``#`` starts a comment.

        Returns:
            Configured ExperimentConfig instance.
        """
        entries = dotenv_values(stream=io.StringIO(text), interpolate=False)
        return ConfigFactory.load_from_flat(dict(entries))

    @staticmethod
    def load_from_file(config_path: str) -> ExperimentConfig:
        """Load configuration from a key-value or YAML file.

        Args:
            config_path: Path to the configuration file. ``.yaml``/``.yml``
                files are read with PyYAML and flattened to dotted keys.

        Returns:
            Configured ExperimentConfig instance.
        """
        config_file = Path(config_path)
        if not config_file.exists():
            raise ConfigurationError(f"Configuration file not found: {config_path}")

        try:
            text = config_file.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"Error reading config file: {e}") from e

        if config_file.suffix.lower() in (".yaml", ".yml"):
            try:
                data = yaml.safe_load(text) or {}
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Invalid YAML in config file: {e}") from e
            if not isinstance(data, Mapping):
                raise ConfigurationError("YAML configuration must be a mapping")
            return ConfigFactory.load_from_dict(data)

        return ConfigFactory.load_from_text(text)

    @staticmethod
    def load_from_dict(config_dict: Mapping[str, Any]) -> ExperimentConfig:
        """Load configuration from a nested or dotted dictionary.

        Args:
            config_dict: Configuration dictionary.

        Returns:
            Configured ExperimentConfig instance.
        """
        return ConfigFactory.load_from_flat(_flatten(config_dict))

    @staticmethod
    def load_from_env(env_file: Optional[str] = None) -> ExperimentConfig:
        """Load the default configuration after reading a ``.env`` file.

        Only the logging variables are taken from the environment.

        Args:
            env_file: Optional path to .env file to load first.

        Returns:
            Default ExperimentConfig instance.
        """
        if env_file:
            load_dotenv(env_file)
        elif Path(".env").exists():
            load_dotenv(".env")
        return ExperimentConfig()


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a flat configuration document.

    Args:
        text: Document with ``section.key = value`` lines.

    Returns:
        Validated configuration with defaults filled in.
    """
    return ConfigFactory.load_from_text(text)


# Global configuration instance
config: Optional[ExperimentConfig] = None


def get_config() -> ExperimentConfig:
    """Get the global configuration instance.

    Returns:
        The global ExperimentConfig instance.

    Raises:
        ConfigurationError: If configuration has not been initialized.
    """
    global config
    if config is None:
        raise ConfigurationError(
            "Configuration not initialized. Call set_config() with a loaded config first."
        )
    return config


def set_config(new_config: ExperimentConfig) -> None:
    """Set the global configuration instance.

    Args:
        new_config: The new configuration to set globally.
    """
    global config
    config = new_config
