"""Atmospheric-turbulence channel modeling for THz UAV MIMO links."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
