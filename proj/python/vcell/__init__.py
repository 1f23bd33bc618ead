"""Virtual-cell clustering and Bloom-filter location for Wi-Fi scan traces."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
