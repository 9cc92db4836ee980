"""PN-ASK covert modulation toolkit."""

from ._pnask import *  # noqa: F401,F403
from ._pnask import __version__  # noqa: F401
