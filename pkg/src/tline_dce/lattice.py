"""Static spectral properties of SQUID-loaded transmission-line lattices.

Four driveable families are supported:

LHTL1  left-handed, SQUIDs in parallel (shunting each node to ground)
LHTL2  left-handed, SQUIDs in series between nodes
RHTL1  right-handed, SQUIDs replacing the shunt capacitors
RHTL2  right-handed, SQUIDs replacing the series inductors

All quantities depend on the cell length only through ``k_j * delta_x =
2*pi*j/N``, so ``delta_x`` defaults to one metre and only rescales wave
vectors and group velocities.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
import math
import warnings

import numpy as np

from .constants import CONSTANTS, HBAR, PHI0
from .errors import DomainError, UnsupportedOperationError


class CircuitFamily(str, Enum):
    LHTL1 = "LHTL1"
    LHTL2 = "LHTL2"
    RHTL1 = "RHTL1"
    RHTL2 = "RHTL2"

    @property
    def left_handed(self) -> bool:
        return self in (CircuitFamily.LHTL1, CircuitFamily.LHTL2)

    @classmethod
    def parse(cls, name: "str | CircuitFamily") -> "CircuitFamily":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            valid = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown circuit family {name!r}; expected one of {valid}") from None


class DriveClass(str, Enum):
    MASSLESS = "massless"
    MASSIVE = "massive"


ALL_FAMILIES = tuple(CircuitFamily)

PHASE_REGIME_MIN_RATIO = 100.0
IR_LIMIT_MIN_RATIO = 10.0


@dataclass(frozen=True)
class CircuitSpec:
    """One lattice: family, element values (SI) and cell count.

    For LHTL2 and RHTL1 the SQUID capacitance is identified with ``C``; ``C_J``
    is then unused by the formulas but still validated.
    """

    family: CircuitFamily
    N: int = 200
    C: float = 0.4e-12
    C_J: float = 0.02e-12
    L: float = 60e-12
    I_c: float = 1.25e-6
    delta_x: float = 1.0
    rhtl2_approx: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", CircuitFamily.parse(self.family))
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ValueError(f"N must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if self.N < 4 or self.N % 2:
            raise ValueError(f"N must be an even integer >= 4, got {self.N}")
        for name in ("C", "C_J", "L", "I_c", "delta_x"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if self.phase_regime_ratio < PHASE_REGIME_MIN_RATIO:
            warnings.warn(
                f"SQUIDs leave the phase regime: E0/(2e)^2/(2C_J) = {self.phase_regime_ratio:.3g}"
                f" < {PHASE_REGIME_MIN_RATIO:g}",
                RuntimeWarning,
                stacklevel=3,
            )
        if self.family is CircuitFamily.LHTL1 and not self.ir_limit_valid:
            warnings.warn(
                f"4C/C_J = {4 * self.C / self.C_J:.3g} < {IR_LIMIT_MIN_RATIO:g}; "
                "the approximate infrared limit is unreliable",
                RuntimeWarning,
                stacklevel=3,
            )

    @property
    def E0(self) -> float:
        """Static Josephson energy I_c * phi0 (J)."""
        return self.I_c * PHI0

    @property
    def tilde_E0(self) -> float:
        return tilde_E(self.E0)

    @property
    def phase_regime_ratio(self) -> float:
        charging = (2 * CONSTANTS.e_charge) ** 2 / (2 * self.C_J)
        return self.E0 / charging

    @property
    def ir_limit_valid(self) -> bool:
        return 4 * self.C / self.C_J >= IR_LIMIT_MIN_RATIO

    @property
    def mode_indices(self) -> np.ndarray:
        """Signed mode labels -N/2..-1, 1..N/2."""
        half = self.N // 2
        return np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])

    @property
    def positive_indices(self) -> np.ndarray:
        return np.arange(1, self.N // 2 + 1)

    def replace(self, **changes) -> "CircuitSpec":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return CircuitSpec(**fields)


def _check_index(spec: CircuitSpec, j) -> np.ndarray:
    j_arr = np.asarray(j)
    if not np.issubdtype(j_arr.dtype, np.integer):
        if np.any(j_arr != np.round(j_arr)):
            raise DomainError(f"mode index must be an integer, got {j!r}")
        j_arr = j_arr.astype(int)
    half = spec.N // 2
    bad = (np.abs(j_arr) < 1) | (np.abs(j_arr) > half)
    if np.any(bad):
        raise DomainError(
            f"mode index {j!r} outside the first Brillouin zone: need 1 <= |j| <= {half}"
        )
    return j_arr


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def wave_vector(spec: CircuitSpec, j) -> float | np.ndarray:
    """k_j = 2*pi*j / (N*delta_x) in rad/m."""
    j_arr = _check_index(spec, j)
    return _scalar(2 * np.pi * j_arr / (spec.N * spec.delta_x))


def tilde_E(E) -> float | np.ndarray:
    """Josephson energy expressed as an inverse inductance, (2*pi/phi0)^2 * E."""
    E_arr = np.asarray(E, dtype=float)
    if np.any(E_arr <= 0):
        raise DomainError(f"Josephson energy must be positive, got {E!r}")
    return _scalar((2 * np.pi / PHI0) ** 2 * E_arr)


def _sin2(spec: CircuitSpec, j_arr: np.ndarray) -> np.ndarray:
    return np.sin(np.pi * j_arr / spec.N) ** 2


def _omega_squared(spec: CircuitSpec, u: np.ndarray, Et) -> np.ndarray:
    """omega^2 as a function of u = sin^2(k dx / 2) and tilde E."""
    C, C_J, L = spec.C, spec.C_J, spec.L
    fam = spec.family
    if fam is CircuitFamily.LHTL1:
        return Et / (4 * C * u + C_J)
    if fam is CircuitFamily.LHTL2:
        return 1.0 / (4 * C * L * u) + Et / C
    if fam is CircuitFamily.RHTL1:
        return 4 * u / (L * C) + Et / C
    if spec.rhtl2_approx:
        return 4 * u * Et / C
    return 4 * u * Et / (C + 4 * C_J * u)


def _domega2_du(spec: CircuitSpec, u: np.ndarray, Et) -> np.ndarray:
    C, C_J, L = spec.C, spec.C_J, spec.L
    fam = spec.family
    if fam is CircuitFamily.LHTL1:
        return -4 * C * Et / (4 * C * u + C_J) ** 2
    if fam is CircuitFamily.LHTL2:
        return -1.0 / (4 * C * L * u**2)
    if fam is CircuitFamily.RHTL1:
        return np.full_like(u, 4 / (L * C))
    if spec.rhtl2_approx:
        return np.full_like(u, 4 * Et / C)
    return 4 * Et * C / (C + 4 * C_J * u) ** 2


def dispersion(spec: CircuitSpec, j, E: float | None = None) -> float | np.ndarray:
    """Mode angular frequency omega_j (rad/s) at Josephson energy ``E`` (default E0)."""
    j_arr = _check_index(spec, j)
    Et = spec.tilde_E0 if E is None else tilde_E(E)
    return _scalar(np.sqrt(_omega_squared(spec, _sin2(spec, j_arr), Et)))


def group_velocity(spec: CircuitSpec, j, E: float | None = None) -> float | np.ndarray:
    """Analytic d(omega)/dk in m/s. Vanishes at the band edge j = N/2."""
    j_arr = _check_index(spec, j)
    Et = spec.tilde_E0 if E is None else tilde_E(E)
    u = _sin2(spec, j_arr)
    omega = np.sqrt(_omega_squared(spec, u, Et))
    kdx = 2 * np.pi * j_arr / spec.N
    du_dk = 0.5 * spec.delta_x * np.sin(kdx)
    return _scalar(_domega2_du(spec, u, Et) * du_dk / (2 * omega))


def infrared_limit(spec: CircuitSpec) -> tuple[float, float]:
    """Band-edge frequency of LHTL1: (exact, 4C >> C_J approximation)."""
    if spec.family is not CircuitFamily.LHTL1:
        raise UnsupportedOperationError(
            f"the infrared limit is defined for LHTL1 only, not {spec.family.value}"
        )
    Et = spec.tilde_E0
    return math.sqrt(Et / (4 * spec.C + spec.C_J)), math.sqrt(Et / (4 * spec.C))


def chi(spec: CircuitSpec, j) -> float | np.ndarray:
    """Commutator weight: [a_j, a_j^dagger] = 1/chi_j."""
    j_arr = _check_index(spec, j)
    u = _sin2(spec, j_arr)
    if spec.family is CircuitFamily.LHTL1:
        return _scalar(4 * u + spec.C_J / spec.C)
    if spec.family is CircuitFamily.LHTL2:
        return _scalar(4 * u)
    return _scalar(np.ones_like(u))


def eigenenergy(spec: CircuitSpec, j, E: float | None = None) -> float | np.ndarray:
    """Single-quantum energy of mode j in joules."""
    j_arr = _check_index(spec, j)
    Et = spec.tilde_E0 if E is None else tilde_E(E)
    fam = spec.family
    if fam is CircuitFamily.LHTL1:
        x = np.asarray(chi(spec, j_arr))
        return _scalar(HBAR * np.sqrt(x * Et / spec.C))
    if fam is CircuitFamily.LHTL2:
        x = np.asarray(chi(spec, j_arr))
        return _scalar(HBAR * np.sqrt(x * Et / spec.C) * np.sqrt(x + 1.0 / (spec.L * Et)))
    return _scalar(HBAR * np.asarray(dispersion(spec, j_arr, E)))


def drive_class(family: CircuitFamily | str) -> DriveClass:
    """Whether the modulated Josephson term scales all of omega^2 or adds to it."""
    family = CircuitFamily.parse(family)
    if family in (CircuitFamily.LHTL1, CircuitFamily.RHTL2):
        return DriveClass.MASSLESS
    return DriveClass.MASSIVE


def modulation_gain(spec: CircuitSpec, j) -> float | np.ndarray:
    """Per-mode g_j with omega_j^2(E) = omega0_j^2 + g_j * (E/E0 - 1), exact."""
    if drive_class(spec.family) is DriveClass.MASSLESS:
        return _scalar(np.asarray(dispersion(spec, j)) ** 2)
    _check_index(spec, j)
    return spec.tilde_E0 / spec.C
