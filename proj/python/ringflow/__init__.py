"""Fundamental traffic diagrams on a circular road.

Thin re-export of the compiled module: min-plus eigenvalues, control/game
closed forms, trajectory simulation, diagrams and piecewise-affine fitting.
"""

from ._ringflow import *  # noqa: F401,F403
from ._ringflow import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
