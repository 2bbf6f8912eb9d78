"""Warped-product curvature, geodesic and covering-distance laboratory."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
