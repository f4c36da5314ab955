"""Exact generating series of paths in graphs, counted by length and by backtracking steps."""
from .catalog import *  # noqa: F401,F403
from .cogrowth import *  # noqa: F401,F403
from .enumeration import *  # noqa: F401,F403
from .exceptions import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .products import *  # noqa: F401,F403
from .series import *  # noqa: F401,F403
from .transfer import *  # noqa: F401,F403
from .zeta import *  # noqa: F401,F403
from . import catalog, cogrowth, enumeration, exceptions, graph, products, series, transfer, zeta

__version__ = "0.1.0"
