"""Figures from cohabitat run directories. Reads CSV artifacts only."""

__version__ = "0.1.0"

from .figures import FIGURE_KINDS, render  # noqa: F401
