"""Allow ``python -m signdiff``."""

import sys

from .cli import main

sys.exit(main())
