"""Heat-current full counting statistics for multilevel open quantum systems."""

from ._core import *  # noqa: F401,F403
