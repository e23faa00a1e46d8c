"""Mode structure of the undriven lattice (t <= 0).

The field on the ring of N nodes is expanded as

    Phi(n, t) = sum_j [phi_j(n, t) a_j + c.c.],
    phi_j(n, t) = sqrt(hbar / (2 C N omega0_j)) * exp(i (k_j n dx - omega0_j t)),

over the signed labels j = +-1..+-N/2.  On a ring the labels N/2 and -N/2 carry
the same lattice wave (k dx = +-pi), so every Kronecker delta in this module is
periodic: delta(i, j) = 1 when i == j mod N.  Amplitudes placed on both band-edge
labels are indistinguishable after sampling; the extractors return their sum.
"""

from __future__ import annotations

from dataclasses import dataclass
import csv
import io

import numpy as np

from . import lattice
from .constants import HBAR
from .errors import DomainError
from .lattice import CircuitFamily, CircuitSpec


@dataclass(frozen=True)
class ModeSet:
    spec: CircuitSpec
    j: np.ndarray
    k: np.ndarray
    omega0: np.ndarray
    chi: np.ndarray
    epsilon: np.ndarray
    amp_norm: np.ndarray
    zeta: np.ndarray

    @property
    def size(self) -> int:
        return len(self.j)

    def index(self, j) -> np.ndarray | int:
        """Row position(s) of signed label(s) ``j``."""
        j_arr = np.asarray(j)
        half = self.spec.N // 2
        if np.any((np.abs(j_arr) < 1) | (np.abs(j_arr) > half)):
            raise DomainError(f"mode index {j!r} outside 1 <= |j| <= {half}")
        pos = np.where(j_arr < 0, j_arr + half, j_arr + half - 1)
        return int(pos) if pos.ndim == 0 else pos

    def to_csv(self, fmt: str = "{:.11e}") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["j", "k", "omega0", "chi", "epsilon_over_hbar", "amp_norm"])
        for row in zip(self.j, self.k, self.omega0, self.chi, self.epsilon / HBAR, self.amp_norm):
            writer.writerow([int(row[0])] + [fmt.format(float(v)) for v in row[1:]])
        return buf.getvalue()


def build_modes(spec: CircuitSpec) -> ModeSet:
    j = spec.mode_indices
    omega0 = np.asarray(lattice.dispersion(spec, j))
    amp_norm = np.sqrt(HBAR / (2 * spec.C * spec.N * omega0))
    zeta = np.sqrt(omega0 * spec.C / (2 * HBAR * spec.N))
    return ModeSet(
        spec=spec,
        j=j,
        k=np.asarray(lattice.wave_vector(spec, j)),
        omega0=omega0,
        chi=np.asarray(lattice.chi(spec, j), dtype=float),
        epsilon=np.asarray(lattice.eigenenergy(spec, j)),
        amp_norm=amp_norm,
        zeta=zeta,
    )


def periodic_delta(N: int, i, j) -> np.ndarray:
    return (np.mod(np.asarray(i) - np.asarray(j), N) == 0).astype(float)


def _nodes(spec: CircuitSpec) -> np.ndarray:
    return np.arange(1, spec.N + 1)


def _phase(modes: ModeSet, rows, t: float) -> np.ndarray:
    """exp(i (k_j n dx - omega0_j t)) for the selected rows, shape (rows, N)."""
    n = _nodes(modes.spec)
    kx = np.outer(modes.k[rows], n * modes.spec.delta_x)
    return np.exp(1j * (kx - (modes.omega0[rows] * t)[:, None]))


def _require_static(t: float) -> None:
    if t > 0:
        raise DomainError(
            "static mode functions are defined for t <= 0 only; "
            "use tline_dce.dynamics for the driven evolution"
        )


def mode_function(modes: ModeSet, j, n, t: float = 0.0) -> complex | np.ndarray:
    """phi_j(n, t) in webers for t <= 0."""
    _require_static(t)
    row = modes.index(j)
    n_arr = np.asarray(n)
    if np.any((n_arr < 1) | (n_arr > modes.spec.N)):
        raise DomainError(f"node index must lie in 1..{modes.spec.N}, got {n!r}")
    phase = modes.k[row] * n_arr * modes.spec.delta_x - modes.omega0[row] * t
    val = modes.amp_norm[row] * np.exp(1j * phase)
    return complex(val) if np.ndim(val) == 0 else val


def mode_arrays(modes: ModeSet, t: float = 0.0, rows=None) -> tuple[np.ndarray, np.ndarray]:
    """Mode functions and their time derivatives sampled on all nodes."""
    _require_static(t)
    rows = np.arange(modes.size) if rows is None else np.asarray(rows)
    phi = modes.amp_norm[rows][:, None] * _phase(modes, rows, t)
    dphi = -1j * modes.omega0[rows][:, None] * phi
    return phi, dphi


def normalization_check(modes: ModeSet, i, j, t: float = 0.0) -> complex:
    """Klein-Gordon-type inner product of modes i and j; expected periodic delta(i, j)."""
    phi, dphi = mode_arrays(modes, t, rows=[modes.index(i), modes.index(j)])
    s = np.sum(phi[0] * np.conj(dphi[1]) - dphi[0] * np.conj(phi[1]))
    return complex(-1j * modes.spec.C / HBAR * s)


def normalization_matrix(modes: ModeSet, t: float = 0.0) -> np.ndarray:
    phi, dphi = mode_arrays(modes, t)
    return -1j * modes.spec.C / HBAR * (phi @ dphi.conj().T - dphi @ phi.conj().T)


def conjugate_momentum(spec: CircuitSpec, Phidot: np.ndarray) -> np.ndarray:
    """Node momenta dL/dPhidot_n on the ring.

    RHTL2 uses C * Phidot, i.e. the 4 C_J << C form that matches the
    standard-commutator (chi = 1) quantization.
    """
    Phidot = np.asarray(Phidot)
    fam = spec.family
    if fam in (CircuitFamily.LHTL1, CircuitFamily.LHTL2):
        lap = 2 * Phidot - np.roll(Phidot, -1) - np.roll(Phidot, 1)
        P = spec.C * lap
        if fam is CircuitFamily.LHTL1:
            P = P + spec.C_J * Phidot
        return P
    return spec.C * Phidot


@dataclass(frozen=True)
class FieldState:
    """Node fluxes and conjugate momenta at one instant (complex allowed)."""

    Phi: np.ndarray
    P: np.ndarray
    Phidot: np.ndarray | None = None

    def __post_init__(self):
        if np.shape(self.Phi) != np.shape(self.P) or np.ndim(self.Phi) != 1:
            raise ValueError(
                f"Phi and P must be 1-D arrays of equal length, got {np.shape(self.Phi)} "
                f"and {np.shape(self.P)}"
            )


def embed(modes: ModeSet, amplitudes: np.ndarray, t: float = 0.0) -> FieldState:
    """Field state generated by classical amplitudes a_j (one per signed label)."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (modes.size,):
        raise ValueError(f"expected {modes.size} amplitudes, got shape {amplitudes.shape}")
    phi, dphi = mode_arrays(modes, t)
    Phi = amplitudes @ phi + np.conj(amplitudes) @ np.conj(phi)
    Phidot = amplitudes @ dphi + np.conj(amplitudes) @ np.conj(dphi)
    return FieldState(Phi=Phi, P=conjugate_momentum(modes.spec, Phidot), Phidot=Phidot)


def _extraction_rows(modes: ModeSet, t: float, chi: np.ndarray | None):
    """Coefficient matrices (U, V) with a = U @ Phi + V @ P."""
    chi = modes.chi if chi is None else np.broadcast_to(np.asarray(chi, dtype=float), modes.chi.shape)
    U = modes.zeta[:, None] * np.conj(_phase(modes, slice(None), t))
    V = U * (1j / (modes.spec.C * chi * modes.omega0))[:, None]
    return U, V


def extract_amplitudes(modes: ModeSet, state: FieldState, t: float = 0.0, chi=None) -> np.ndarray:
    """Discrete Fourier projection of (Phi, P) onto every mode label."""
    if len(state.Phi) != modes.spec.N:
        raise ValueError(f"state has {len(state.Phi)} nodes, lattice has {modes.spec.N}")
    U, V = _extraction_rows(modes, t, chi)
    return U @ np.asarray(state.Phi) + V @ np.asarray(state.P)


def extract_amplitude(modes: ModeSet, state: FieldState, h, t: float = 0.0, chi=None) -> complex:
    return complex(extract_amplitudes(modes, state, t, chi)[modes.index(h)])


def commutator_matrix(modes: ModeSet, t: float = 0.0, chi=None) -> np.ndarray:
    """[a_j, a_h^dagger] from [Phi_n, P_m] = i hbar delta_nm.

    With a_j = sum_n U_jn Phi_n + V_jn P_n, the double node sum collapses to
    i hbar (U V^dagger - V U^dagger).  ``chi`` overrides the weights used in
    the extraction (negative-control hook).
    """
    U, V = _extraction_rows(modes, t, chi)
    return 1j * HBAR * (U @ V.conj().T - V @ U.conj().T)


def hamiltonian_spectrum(modes: ModeSet, occupation) -> float:
    """Energy (J) of a Fock state with the given per-label occupations."""
    occ = np.asarray(occupation)
    if occ.shape != (modes.size,):
        raise ValueError(f"expected {modes.size} occupations, got shape {occ.shape}")
    if np.any(occ < 0):
        raise DomainError("occupation numbers must be non-negative")
    return float(np.sum(HBAR * modes.omega0 * (modes.chi * occ + 0.5)))


def field_energy(spec: CircuitSpec, Phi: np.ndarray, Phidot: np.ndarray) -> float:
    """Classical energy T + V of a real nodal configuration from the circuit Lagrangian."""
    Phi = np.asarray(Phi)
    Phidot = np.asarray(Phidot)
    Et = spec.tilde_E0
    d_Phi = np.roll(Phi, -1) - Phi
    d_dot = np.roll(Phidot, -1) - Phidot
    fam = spec.family
    if fam is CircuitFamily.LHTL1:
        T = spec.C * d_dot**2 + spec.C_J * Phidot**2
        V = Et * Phi**2
    elif fam is CircuitFamily.LHTL2:
        T = spec.C * d_dot**2
        V = Phi**2 / spec.L + Et * d_Phi**2
    elif fam is CircuitFamily.RHTL1:
        T = spec.C * Phidot**2
        V = d_Phi**2 / spec.L + Et * Phi**2
    else:
        T = spec.C * Phidot**2
        V = Et * d_Phi**2
    return float(0.5 * np.sum(np.real(T + V)))


def amplitude_energy(modes: ModeSet, amplitudes) -> float:
    """sum_j hbar omega0_j chi_j |a_j|^2, the normal-ordered mode energy."""
    a = np.asarray(amplitudes)
    return float(np.sum(HBAR * modes.omega0 * modes.chi * np.abs(a) ** 2))
