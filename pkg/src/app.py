#!/usr/bin/env python3
"""
Main entry point for the private estimation experiment harness.
"""

import sys
from pathlib import Path

# Add the src directory and the project root (for ``config``) to Python path
src_dir = Path(__file__).parent
sys.path.insert(0, str(src_dir))
sys.path.insert(0, str(src_dir.parent))

from harness.cli import main as cli_main  # noqa: E402


def main() -> None:
    """Run the CLI and exit with its status code."""
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
