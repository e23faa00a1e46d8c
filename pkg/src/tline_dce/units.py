"""Lexer for unit-suffixed quantities such as "0.4 pF" or "1.25 uA"."""

from __future__ import annotations

import math
import re

PREFIXES = {
    "f": 1e-15,
    "p": 1e-12,
    "n": 1e-9,
    "u": 1e-6,
    "μ": 1e-6,
    "µ": 1e-6,
    "m": 1e-3,
    "": 1.0,
    "k": 1e3,
    "M": 1e6,
    "G": 1e9,
    "T": 1e12,
}

# unit symbol -> (dimension, factor to SI)
UNITS = {
    "F": ("capacitance", 1.0),
    "H": ("inductance", 1.0),
    "A": ("current", 1.0),
    "m": ("length", 1.0),
    "s": ("time", 1.0),
    "rad/s": ("angular_frequency", 1.0),
    "Hz": ("angular_frequency", 2 * math.pi),
}

SI_SYMBOL = {dim: sym for sym, (dim, f) in UNITS.items() if f == 1.0}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$")


class UnitError(ValueError):
    pass


def _split_unit(token: str) -> tuple[float, str]:
    # longest unit symbol first so "mm" is milli-metre and "m" is metre
    for sym in sorted(UNITS, key=len, reverse=True):
        if token.endswith(sym):
            prefix = token[: -len(sym)]
            if prefix in PREFIXES:
                return PREFIXES[prefix], sym
    raise UnitError(f"unknown unit {token!r}")


def parse_quantity(text, dimension: str) -> float:
    """Convert ``"<number> <prefix><unit>"`` to SI, checking the dimension.

    Bare numbers are rejected.  ``Hz`` is read as a cyclic frequency and
    converted to rad/s.
    """
    if not isinstance(text, str):
        raise UnitError(f"expected a unit-suffixed string for a {dimension}, got bare value {text!r}")
    m = _QUANTITY.match(text)
    if not m:
        raise UnitError(f"cannot parse {text!r}; expected '<number> <unit>' for a {dimension}")
    value = float(m.group(1))
    scale, sym = _split_unit(m.group(2))
    dim, factor = UNITS[sym]
    if dim != dimension:
        raise UnitError(f"{text!r} is a {dim}, expected a {dimension}")
    return value * scale * factor


def format_quantity(value: float, dimension: str) -> str:
    """SI string that :func:`parse_quantity` reads back exactly."""
    return f"{float(value)!r} {SI_SYMBOL[dimension]}"
