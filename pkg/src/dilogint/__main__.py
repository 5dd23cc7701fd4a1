import sys

from .expr.cli import main

sys.exit(main())
