"""Finite-blocklength bounds and Monte Carlo simulation for the
power-constrained AWGN channel."""

from ._fbawgn import *  # noqa: F401,F403
from ._fbawgn import __version__  # noqa: F401
