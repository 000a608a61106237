#!/usr/bin/env python3
"""
Dependency validation script for PAM Lab.

Imports every runtime and test dependency and reports its version, then
checks that the numerical pieces the laboratory relies on are present:
the Philox bit generator, scipy's real FFTs and the grid interpolator.
"""

import importlib
import sys
from typing import List, Tuple

RUNTIME = [
    ("numpy", "numpy"),
    ("scipy", "scipy"),
    ("pandas", "pandas"),
    ("pydantic", "pydantic"),
    ("python-dotenv", "dotenv"),
    ("pyyaml", "yaml"),
]

TESTING = [
    ("pytest", "pytest"),
    ("hypothesis", "hypothesis"),
]


def validate_imports(packages: List[Tuple[str, str]]) -> List[Tuple[str, bool, str]]:
    """Import each package and record its version."""
    results = []
    for name, module_name in packages:
        try:
            module = importlib.import_module(module_name)
            version = getattr(module, "__version__", "loaded")
            results.append((name, True, f"Version: {version}"))
        except ImportError as e:
            results.append((name, False, str(e)))
    return results


def validate_numerical_features() -> List[Tuple[str, bool, str]]:
    """Check the library features the solvers and samplers use."""
    results = []
    try:
        import numpy as np

        np.random.Generator(np.random.Philox(np.random.SeedSequence(0)))
        results.append(("numpy Philox", True, "counter-based generator available"))
    except (ImportError, AttributeError) as e:
        results.append(("numpy Philox", False, str(e)))

    try:
        from scipy import fft
        from scipy.interpolate import RegularGridInterpolator  # noqa: F401

        fft.next_fast_len(1000, real=True)
        results.append(("scipy fft/interpolate", True, "available"))
    except (ImportError, TypeError) as e:
        results.append(("scipy fft/interpolate", False, str(e)))
    return results


def main() -> int:
    """Run dependency validation."""
    print("🔍 Validating PAM Lab Dependencies\n")

    all_results = []
    for title, results in (
        ("📦 Runtime Dependencies:", validate_imports(RUNTIME)),
        ("🧪 Test Dependencies:", validate_imports(TESTING)),
        ("🔢 Numerical Features:", validate_numerical_features()),
    ):
        print(title)
        all_results.extend(results)
        for name, success, info in results:
            status = "✅" if success else "❌"
            print(f"  {status} {name}: {info}")
        print()

    successful = sum(1 for _, success, _ in all_results if success)
    total = len(all_results)
    print(f"📊 Summary: {successful}/{total} dependencies validated successfully")

    if successful == total:
        print("🎉 All dependencies are available!")
        return 0
    print("⚠️  Some dependencies are missing. Please install them using:")
    print("   pip install -r requirements.txt -r requirements-dev.txt")
    return 1


if __name__ == "__main__":
    sys.exit(main())
