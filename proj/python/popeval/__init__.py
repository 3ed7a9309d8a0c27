"""Character-level end-to-end OCR evaluation toolkit."""

from popeval._core import *  # noqa: F401,F403
from popeval._core import __version__  # noqa: F401
