"""
(__main__.py) Allows `python -m modcount ...`.
"""

import sys

from modcount.main import main

sys.exit(main())
