"""Command-Line Entry Point

Dispatches ``pam-lab`` and ``python -m src.main`` to the harness.
"""

import sys
from typing import Optional, Sequence

from .harness.cli import main as run


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
