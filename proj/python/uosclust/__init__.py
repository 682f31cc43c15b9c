"""Subspace clustering and completion under missing data.

Thin wrapper over the C++ core; see the individual functions' docstrings.
"""

from ._core import *  # noqa: F401,F403
from ._core import __all__  # noqa: F401

__version__ = "0.1.0"
