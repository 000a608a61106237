"""Unit tests for dependency validation and tool configurations.

Tests that the numerical stack is importable, that the library features the
solvers rely on exist, and that the project metadata is consistent.
"""

import importlib
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[2]


class TestRequiredDependencies:
    """Test that all required dependencies are available."""

    def test_requirements_file_exists(self):
        """Test that requirements.txt exists and is readable."""
        requirements_path = PROJECT_ROOT / "requirements.txt"
        assert requirements_path.exists(), "requirements.txt should exist"

        content = requirements_path.read_text()
        for package in ["numpy", "scipy", "pandas", "pydantic", "python-dotenv"]:
            assert package in content, f"requirements.txt should pin {package}"

    def test_requirements_dev_file_exists(self):
        """Test that requirements-dev.txt exists and pulls in hypothesis."""
        content = (PROJECT_ROOT / "requirements-dev.txt").read_text()

        assert "hypothesis" in content
        assert "pytest" in content

    @pytest.mark.parametrize(
        "import_name", ["numpy", "scipy", "pandas", "pydantic", "dotenv", "yaml"]
    )
    def test_core_dependencies_importable(self, import_name):
        """Test that core dependencies can be imported."""
        importlib.import_module(import_name)

    def test_development_dependencies_importable(self):
        """Test that development dependencies can be imported."""
        dev_dependencies = ["black", "flake8", "mypy", "isort"]

        failed_imports = []
        for dep in dev_dependencies:
            try:
                importlib.import_module(dep)
            except ImportError as e:
                failed_imports.append(f"{dep}: {str(e)}")

        # Development dependencies are optional in some environments
        if failed_imports:
            pytest.skip(f"Development dependencies not available: {failed_imports}")


class TestNumericalFeatures:
    """Test the library features the samplers and solvers use."""

    def test_philox_generator_is_keyed(self):
        import numpy as np

        first = np.random.Generator(np.random.Philox(key=11)).standard_normal(4)
        second = np.random.Generator(np.random.Philox(key=11)).standard_normal(4)

        np.testing.assert_array_equal(first, second)

    def test_scipy_components(self):
        from scipy import fft, integrate, special
        from scipy.interpolate import RegularGridInterpolator

        assert fft.next_fast_len(129, real=True) >= 129
        assert special.comb(6, 3, exact=True) == 20
        assert integrate.quad(lambda x: x, 0.0, 1.0)[0] == pytest.approx(0.5)
        assert RegularGridInterpolator is not None


class TestProjectConfiguration:
    """Test that project metadata and tool configuration are in place."""

    def test_pyproject_metadata(self):
        content = (PROJECT_ROOT / "pyproject.toml").read_text()

        assert "[project]" in content
        assert 'name = "pam-lab"' in content
        assert 'pam-lab = "src.main:main"' in content

    def test_tool_configuration(self):
        content = (PROJECT_ROOT / "pyproject.toml").read_text()

        for section in ["[tool.black]", "[tool.isort]", "[tool.mypy]"]:
            assert section in content, f"pyproject.toml should configure {section}"
        assert "line-length = 88" in content

    def test_source_directory_structure(self):
        """Test that src/ has the core modules and subpackages."""
        src_path = PROJECT_ROOT / "src"

        for module in ["__init__.py", "config.py", "exceptions.py", "utils.py"]:
            assert (src_path / module).exists(), f"src/{module} should exist"
        for package in [
            "lattice",
            "stochastics",
            "kernels",
            "enhancement",
            "besov",
            "solver",
            "harness",
        ]:
            assert (src_path / package / "__init__.py").exists()

    def test_python_version_compatibility(self):
        """Test that Python version meets requirements."""
        assert sys.version_info >= (3, 8)
