"""Fixed physical constants (SI)."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    phi0: float = 2.067833848e-15  # Wb
    # derived from hbar and phi0 so that phi0 == pi*hbar/e holds exactly
    e_charge: float = math.pi * 1.054571817e-34 / 2.067833848e-15  # C

    def consistency_error(self) -> float:
        """Relative mismatch between phi0 and pi*hbar/e."""
        return abs(math.pi * self.hbar / self.e_charge - self.phi0) / self.phi0


CONSTANTS = PhysicalConstants()
HBAR = CONSTANTS.hbar
PHI0 = CONSTANTS.phi0
E_CHARGE = CONSTANTS.e_charge
