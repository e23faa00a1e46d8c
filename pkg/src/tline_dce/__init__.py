"""Particle creation in SQUID-loaded left- and right-handed transmission lines."""

from .lattice import CircuitFamily, CircuitSpec, DriveClass
from .dynamics import BogoliubovResult, DriveSpec, ModeTrajectory
from .quantization import FieldState, ModeSet, build_modes

__all__ = [
    "BogoliubovResult",
    "CircuitFamily",
    "CircuitSpec",
    "DriveClass",
    "DriveSpec",
    "FieldState",
    "ModeSet",
    "ModeTrajectory",
    "build_modes",
]
__version__ = "0.1.0"
