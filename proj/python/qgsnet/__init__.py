"""Gradient-flow training of small fully recurrent networks.

Thin wrapper over the compiled _qgsnet extension; everything user-facing
lives there.
"""

from ._qgsnet import *  # noqa: F401,F403
from ._qgsnet import __version__  # noqa: F401
