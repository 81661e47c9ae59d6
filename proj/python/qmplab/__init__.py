"""Quantum-search motion planning laboratory.

Thin re-export of the compiled core: amplitude amplification over oracle
masks, random-lattice connectivity estimators, tracking dynamics, and the
q-FPS / q-RRT planners with their classical baselines.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
