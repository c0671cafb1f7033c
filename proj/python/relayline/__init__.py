"""Achievable rates, relay placement, and as-you-go deployment on lines."""

from relayline._core import *  # noqa: F401,F403
from relayline._core import __doc__  # noqa: F401

__version__ = "1.0.0"
