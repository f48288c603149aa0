"""Python bindings for the gravchan entangled-atom channel simulator."""

from ._gravchan import *  # noqa: F401,F403
from ._gravchan import GravchanError, __doc__  # noqa: F401

__version__ = "0.1.0"
