"""Unit tests for configuration management system.

Tests the flat key-value document, YAML and dictionary loading strategies,
cross-section validation and the global configuration accessors.
"""

import os

import pytest

from src.config import (
    CONFIG_KEYS,
    ConfigFactory,
    ConfigurationError,
    ExperimentConfig,
    GridConfig,
    MollifierConfig,
    NoiseConfig,
    SolveConfig,
    get_config,
    parse_config,
    set_config,
)


class TestSectionDefaults:
    """Test default values of the configuration sections."""

    def test_grid_defaults(self):
        config = GridConfig()

        assert config.L == 8.0
        assert config.n == 512
        assert config.spacing == pytest.approx(1.0 / 32.0)

    def test_noise_defaults(self):
        config = NoiseConfig()

        assert config.seeds == [1, 2, 3, 4, 5]
        assert config.u0_width == 0.5

    def test_mollifier_defaults(self):
        assert MollifierConfig().eps_ladder == [0.25, 0.125, 0.0625]

    def test_solver_defaults(self):
        config = SolveConfig()

        assert config.kappa == 0.1
        assert config.a == 0.04
        assert config.picard_norm == "auto"
        assert config.quadrature == "left-point"
        assert config.steps == 200


class TestSolveConfig:
    """Test solver parameter validation."""

    def test_steps(self):
        assert SolveConfig(T=0.02, dt=1e-3).steps == 20
        assert SolveConfig(T=0.1, dt=2e-3).steps == 50

    @pytest.mark.parametrize(
        "kwargs, key",
        [
            ({"kappa": 0.5}, "solver.kappa"),
            ({"kappa": 0.0}, "solver.kappa"),
            ({"kappa": 0.1, "a": 0.05}, "solver.a"),
            ({"a": 0.0}, "solver.a"),
            ({"T": 1e-4, "dt": 1e-3}, "solver.T"),
            ({"T": 0.0205, "dt": 1e-3}, "solver.T"),
            ({"dt": 0.0}, "solver.dt"),
            ({"norm_r": 1.0}, "solver.norm_r"),
            ({"picard_norm": "l2"}, "solver.picard_norm"),
            ({"quadrature": "trapezoid"}, "solver.quadrature"),
            ({"frame_stride": 0}, "solver.frame_stride"),
        ],
    )
    def test_invalid_parameters(self, kwargs, key):
        with pytest.raises(ConfigurationError) as exc_info:
            SolveConfig(**kwargs)

        assert exc_info.value.key == key

    def test_weight_exponent_bound_message(self):
        with pytest.raises(ConfigurationError, match="a must be < κ/2"):
            SolveConfig(kappa=0.1, a=0.06)


class TestExperimentConfig:
    """Test main ExperimentConfig class."""

    def setup_method(self):
        """Setup for each test method."""
        import src.config

        src.config.config = None

        self.original_env = {}
        for key in ["PAMLAB_LOG_LEVEL", "PAMLAB_ENVIRONMENT"]:
            if key in os.environ:
                self.original_env[key] = os.environ[key]
                del os.environ[key]

    def teardown_method(self):
        """Cleanup after each test method."""
        for key in ["PAMLAB_LOG_LEVEL", "PAMLAB_ENVIRONMENT"]:
            os.environ.pop(key, None)
        for key, value in self.original_env.items():
            os.environ[key] = value

    def test_default_config_is_valid(self):
        config = ExperimentConfig()

        assert config.name == "pam"
        assert config.log_level == "INFO"
        assert config.environment == "development"
        assert isinstance(config.solver, SolveConfig)

    def test_environment_variables(self):
        os.environ["PAMLAB_LOG_LEVEL"] = "DEBUG"
        os.environ["PAMLAB_ENVIRONMENT"] = "production"

        config = ExperimentConfig()

        assert config.log_level == "DEBUG"
        assert config.environment == "production"

    def test_grid_must_be_power_of_two(self):
        config = ExperimentConfig()
        config.grid.n = 96

        with pytest.raises(ConfigurationError, match="grid.n must be a power of two"):
            config._validate_config()

    def test_small_box_rejected(self):
        with pytest.raises(ConfigurationError) as exc_info:
            ExperimentConfig(grid=GridConfig(L=0.5, n=64))

        assert exc_info.value.key == "grid.L"

    def test_ladder_must_decrease(self):
        with pytest.raises(ConfigurationError, match="strictly decreasing"):
            ExperimentConfig(mollifier=MollifierConfig(eps_ladder=[0.25, 0.25]))

    def test_under_resolved_ladder(self):
        # h = 1/32 so ε must be at least 1/16
        with pytest.raises(ConfigurationError, match="under-resolved"):
            ExperimentConfig(mollifier=MollifierConfig(eps_ladder=[0.25, 0.03125]))

    def test_negative_seed_rejected(self):
        with pytest.raises(ConfigurationError) as exc_info:
            ExperimentConfig(noise=NoiseConfig(seeds=[1, -2]))

        assert exc_info.value.key == "noise.seeds"

    def test_collar_must_fit_box(self):
        config = ExperimentConfig()
        config.report.collar = 8.0

        with pytest.raises(ConfigurationError, match="report.collar"):
            config._validate_config()

    def test_flat_echo_covers_every_key(self):
        echo = ExperimentConfig().to_flat_dict()

        assert set(echo) == set(CONFIG_KEYS)
        assert echo["grid.n"] == "512"
        assert echo["noise.seeds"] == "1, 2, 3, 4, 5"


class TestConfigFactory:
    """Test ConfigFactory methods."""

    def setup_method(self):
        import src.config

        src.config.config = None

    def test_parse_flat_document(self):
        config = parse_config(
            """
# comment line
experiment.name = ladder
grid.L = 4
grid.n = 256
noise.seeds = 3, 4
mollifier.eps_ladder = 2^-2, 2^-3, 2^-4
solver.T = 0.05
"""
        )

        assert config.name == "ladder"
        assert config.grid.L == 4.0
        assert config.grid.n == 256
        assert config.noise.seeds == [3, 4]
        assert config.mollifier.eps_ladder == [0.25, 0.125, 0.0625]
        assert config.solver.T == 0.05
        assert config.solver.dt == 1e-3

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config("grid.size = 4\n")

        assert exc_info.value.key == "grid.size"

    def test_unparsable_value(self):
        with pytest.raises(ConfigurationError, match="invalid value for grid.n"):
            parse_config("grid.n = many\n")

    @pytest.mark.parametrize("raw", ["inf^1", "nan^2", "2^100000", "-8^0.5"])
    def test_non_finite_dyadic_value(self, raw):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config(f"solver.T = {raw}\n")

        assert exc_info.value.key == "solver.T"

    def test_final_time_off_the_mesh(self):
        with pytest.raises(ConfigurationError, match="whole number of steps"):
            parse_config("solver.T = 0.0215\nsolver.dt = 0.001\n")

    def test_missing_value(self):
        with pytest.raises(ConfigurationError, match="missing value"):
            ConfigFactory.load_from_flat({"grid.L": ""})

    def test_constraint_violation_from_document(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config("solver.kappa = 0.1\nsolver.a = 0.2\n")

        assert exc_info.value.key == "solver.a"

    def test_load_from_file(self, config_file):
        config = ConfigFactory.load_from_file(str(config_file))

        assert config.name == "smoke"
        assert config.grid.n == 64
        assert config.mollifier.eps_ladder == [0.5, 0.25, 0.125]
        assert config.fk.walkers == 2000

    def test_load_from_yaml_file(self, tmp_path):
        path = tmp_path / "study.yaml"
        path.write_text(
            """
experiment:
  name: yaml-study
log:
  level: WARNING
grid:
  L: 2
  n: 64
noise:
  seeds: [7, 8]
mollifier:
  eps_ladder: [0.5, 0.25, 0.125]
solver:
  T: 0.05
""",
            encoding="utf-8",
        )

        config = ConfigFactory.load_from_file(str(path))

        assert config.name == "yaml-study"
        assert config.log_level == "WARNING"
        assert config.noise.seeds == [7, 8]
        assert config.mollifier.eps_ladder == [0.5, 0.25, 0.125]
        assert config.solver.T == 0.05

    def test_load_from_file_not_found(self, tmp_path):
        with pytest.raises(ConfigurationError, match="Configuration file not found"):
            ConfigFactory.load_from_file(str(tmp_path / "nonexistent.cfg"))

    def test_load_from_dict(self):
        config = ConfigFactory.load_from_dict(
            {"grid": {"L": 2, "n": 64}, "mollifier.eps_ladder": [0.5, 0.25]}
        )

        assert config.grid.L == 2.0
        assert config.mollifier.eps_ladder == [0.5, 0.25]

    def test_load_from_env(self, clean_environment, tmp_path):
        env_file = tmp_path / ".env"
        env_file.write_text("PAMLAB_LOG_LEVEL=ERROR\n", encoding="utf-8")

        try:
            config = ConfigFactory.load_from_env(str(env_file))
            assert config.log_level == "ERROR"
        finally:
            os.environ.pop("PAMLAB_LOG_LEVEL", None)


class TestGlobalConfigManagement:
    """Test global configuration management functions."""

    def setup_method(self):
        import src.config

        src.config.config = None

    def test_get_config_not_initialized(self):
        with pytest.raises(ConfigurationError, match="Configuration not initialized"):
            get_config()

    def test_set_and_get_config(self):
        test_config = ExperimentConfig(name="global")

        set_config(test_config)

        assert get_config() is test_config
