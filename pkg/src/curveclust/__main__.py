"""Allow running the command line interface as ``python -m curveclust``."""

import sys

from curveclust.cli import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
