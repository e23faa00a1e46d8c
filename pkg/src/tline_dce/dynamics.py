"""Parametrically driven mode evolution and Bogoliubov coefficients.

Each Fourier mode h obeys Q'' + omega_h(t)^2 Q = 0 while the Josephson energy
is modulated as E(t) = E0 [1 + 4 eta sin(Omega t)] on 0 <= t <= t_f.  Two
independent routes give the Bogoliubov pair (alpha, beta):

* :func:`multiscale_AB` -- closed-form first-order multiple-scale amplitudes,
  valid on exact parametric resonance Omega = 2 omega0_h.
* :func:`integrate_mode` + :func:`extract_AB_numeric` -- adaptive Runge-Kutta
  integration of the exact mode equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from . import lattice
from .errors import DomainError, IntegrationError
from .lattice import CircuitSpec, DriveClass

ANALYTIC = "analytic-multiscale"
NUMERIC = "numeric-ode"

RAMPS = ("hard", "cosine")


@dataclass(frozen=True)
class DriveSpec:
    """Josephson-energy modulation E0 [1 + 4 eta w(t) sin(Omega t)], 0 <= t <= t_f.

    ``w`` is 1 for the hard ramp; the cosine ramp raises and lowers it as
    (1 - cos(pi t / ramp_window)) / 2 over ``ramp_window`` at each end.
    ``tol_res`` is the relative detuning |Omega - 2 omega0| / (2 omega0)
    still counted as resonant (default eta / 2).
    """

    eta: float
    Omega: float
    t_f: float
    ramp: str = "hard"
    ramp_window: float = 0.0
    tol_res: float | None = None

    def __post_init__(self):
        if not (0 <= self.eta <= 0.1):
            raise ValueError(f"eta must lie in [0, 0.1], got {self.eta!r}")
        if self.eta > 0.05:
            warnings.warn(
                f"eta = {self.eta:g} > 0.05: first-order multiscale results lose accuracy",
                RuntimeWarning,
                stacklevel=3,
            )
        if not self.Omega > 0:
            raise ValueError(f"Omega must be positive, got {self.Omega!r}")
        if not self.t_f > 0:
            raise ValueError(f"t_f must be positive, got {self.t_f!r}")
        if self.ramp not in RAMPS:
            raise ValueError(f"ramp must be one of {RAMPS}, got {self.ramp!r}")
        if self.ramp == "cosine" and not (0 < self.ramp_window <= self.t_f / 2):
            raise ValueError("cosine ramp needs 0 < ramp_window <= t_f / 2")
        if self.tol_res is None:
            object.__setattr__(self, "tol_res", self.eta / 2)

    @property
    def tau(self) -> float:
        """Slow time eta * t_f (s)."""
        return self.eta * self.t_f

    @classmethod
    def resonant(
        cls,
        spec: CircuitSpec,
        h: int,
        eta: float,
        *,
        tau: float | None = None,
        t_f: float | None = None,
        detuning: float = 0.0,
        **kwargs,
    ) -> "DriveSpec":
        """Drive at Omega = 2 omega0_h (1 + detuning); give either ``tau`` or ``t_f``."""
        if (tau is None) == (t_f is None):
            raise ValueError("give exactly one of tau or t_f")
        if t_f is None:
            if eta == 0:
                raise ValueError("tau cannot fix t_f when eta = 0; pass t_f")
            t_f = tau / eta
        omega0 = lattice.dispersion(spec, h)
        return cls(eta=eta, Omega=2 * omega0 * (1 + detuning), t_f=t_f, **kwargs)


def envelope(drive: DriveSpec, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    inside = (t >= 0) & (t <= drive.t_f)
    if drive.ramp == "hard":
        return inside.astype(float)
    T = drive.ramp_window
    rise = 0.5 * (1 - np.cos(np.pi * np.clip(t / T, 0, 1)))
    fall = 0.5 * (1 - np.cos(np.pi * np.clip((drive.t_f - t) / T, 0, 1)))
    return np.where(inside, np.minimum(rise, fall), 0.0)


def modulation(drive: DriveSpec, t) -> np.ndarray:
    """E(t)/E0 - 1."""
    t = np.asarray(t, dtype=float)
    return 4 * drive.eta * envelope(drive, t) * np.sin(drive.Omega * t)


def drive_energy(spec: CircuitSpec, drive: DriveSpec, t) -> float | np.ndarray:
    """Josephson energy E(t) in joules; E0 outside the drive window."""
    E = spec.E0 * (1 + modulation(drive, t))
    return E.item() if E.ndim == 0 else E


def instantaneous_frequency(spec: CircuitSpec, drive: DriveSpec, j, t) -> float | np.ndarray:
    """omega_j(t) from the family's dispersion evaluated at E(t)."""
    t_arr = np.asarray(t, dtype=float)
    E = np.asarray(drive_energy(spec, drive, t_arr))
    if E.ndim == 0:
        return lattice.dispersion(spec, j, float(E))
    return np.array([lattice.dispersion(spec, j, float(e)) for e in E])


def resonance_offset(drive: DriveSpec, omega0_h: float) -> float:
    """Relative detuning (Omega - 2 omega0) / (2 omega0)."""
    return (drive.Omega - 2 * omega0_h) / (2 * omega0_h)


def is_resonant(drive: DriveSpec, omega0_h: float) -> bool:
    return abs(resonance_offset(drive, omega0_h)) <= drive.tol_res


def growth_rate(spec: CircuitSpec, h) -> float:
    """Slow-time rate r with A, B ~ sinh(r tau), cosh(r tau) on resonance (1/s)."""
    omega0 = lattice.dispersion(spec, h)
    if lattice.drive_class(spec.family) is DriveClass.MASSLESS:
        return omega0
    return spec.tilde_E0 / (spec.C * omega0)


def multiscale_AB(spec: CircuitSpec, drive: DriveSpec, h: int, tau: float | None = None):
    """First-order multiple-scale amplitudes (A_hh, B_hh) at slow time ``tau``.

    Off resonance the amplitudes stay at their initial values (0, 1/sqrt(2 omega0)).
    """
    tau = drive.tau if tau is None else tau
    if tau < 0:
        raise DomainError(f"slow time must be non-negative, got {tau!r}")
    omega0 = lattice.dispersion(spec, h)
    norm = 1.0 / math.sqrt(2 * omega0)
    if not is_resonant(drive, omega0):
        return 0.0 + 0j, norm + 0j
    x = growth_rate(spec, h) * tau
    return norm * math.sinh(x) + 0j, norm * math.cosh(x) + 0j


@dataclass(frozen=True)
class BogoliubovResult:
    mode: int
    alpha: complex
    beta: complex
    method: str
    tau: float
    resonant: bool

    @property
    def particle_number(self) -> float:
        return abs(self.beta) ** 2

    @property
    def unitarity(self) -> float:
        """|alpha|^2 - |beta|^2, equal to 1 for a canonical transformation."""
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2


def bogoliubov_from_AB(
    A: complex,
    B: complex,
    omega0_h: float,
    *,
    mode: int = 0,
    method: str = ANALYTIC,
    tau: float = 0.0,
    resonant: bool = True,
) -> BogoliubovResult:
    s = math.sqrt(2 * omega0_h)
    return BogoliubovResult(
        mode=mode, alpha=complex(s * B), beta=complex(s * A), method=method, tau=tau, resonant=resonant
    )


def analytic_bogoliubov(spec: CircuitSpec, drive: DriveSpec, h: int, tau: float | None = None):
    tau = drive.tau if tau is None else tau
    omega0 = lattice.dispersion(spec, h)
    A, B = multiscale_AB(spec, drive, h, tau)
    return bogoliubov_from_AB(
        A, B, omega0, mode=h, method=ANALYTIC, tau=tau, resonant=is_resonant(drive, omega0)
    )


@dataclass(frozen=True)
class ModeTrajectory:
    """Driven mode history.

    ``Q`` is dimensionless, in units of the initial norm 1/sqrt(2 omega0), so
    Q(0) = 1.  ``Qdot`` is its time derivative in 1/s.  Multiply both by
    ``norm`` for the physical expansion coefficient.
    """

    mode: int
    omega0: float
    t: np.ndarray
    Q: np.ndarray
    Qdot: np.ndarray
    nfev: int = 0
    norm: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "norm", 1.0 / math.sqrt(2 * self.omega0))

    @property
    def wronskian(self) -> np.ndarray:
        return self.Q * np.conj(self.Qdot) - np.conj(self.Q) * self.Qdot

    @property
    def wronskian_drift(self) -> np.ndarray:
        W = self.wronskian
        return np.abs(W / W[0] - 1)


def integrate_mode(
    spec: CircuitSpec,
    drive: DriveSpec,
    h: int,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    samples: int | np.ndarray = 512,
    initial_velocity: str = "continuity",
) -> ModeTrajectory:
    """Integrate Q'' + omega_h(t)^2 Q = 0 over [0, t_f] with DOP853.

    Time is scaled by omega0 so the state is O(1).  ``initial_velocity``
    selects Qdot(0) = -i omega0 Q(0) ("continuity", matches the t <= 0 mode) or
    the literal -i sqrt(2 omega0) with Q(0) = 1/sqrt(2 omega0) ("literal").
    ``samples`` is a count of evenly spaced output times or an explicit array
    of physical times in [0, t_f].
    """
    if not (rtol > 0 and atol > 0):
        raise ValueError("rtol and atol must be positive")
    omega0 = lattice.dispersion(spec, h)
    # omega^2(t) / omega0^2 = 1 + gain * (E(t)/E0 - 1), exact for every family
    gain = lattice.modulation_gain(spec, h) / omega0**2
    if initial_velocity == "continuity":
        v0 = -1j
    elif initial_velocity == "literal":
        v0 = -2j
    else:
        raise ValueError(f"initial_velocity must be 'continuity' or 'literal', got {initial_velocity!r}")

    s_f = omega0 * drive.t_f
    eta4 = 4 * drive.eta
    w = drive.Omega / omega0
    hard = drive.ramp == "hard"

    if hard:
        def rhs(s, y):
            return np.array([y[1], -(1 + gain * eta4 * math.sin(w * s)) * y[0]])
    else:
        def rhs(s, y):
            m = float(modulation(drive, s / omega0))
            return np.array([y[1], -(1 + gain * m) * y[0]])

    if np.ndim(samples) == 0:
        t_eval = np.linspace(0.0, s_f, max(int(samples), 2))
    else:
        t_eval = omega0 * np.asarray(samples, dtype=float)
        if t_eval[0] < 0 or t_eval[-1] > s_f * (1 + 1e-12):
            raise ValueError("sample times must lie within [0, t_f]")
        t_eval = np.clip(t_eval, 0.0, s_f)

    sol = solve_ivp(
        rhs,
        (0.0, s_f),
        np.array([1.0 + 0j, v0]),
        method="DOP853",
        t_eval=t_eval,
        rtol=rtol,
        atol=atol,
    )
    if sol.status != 0:
        last = sol.t[-1] / omega0 if sol.t.size else 0.0
        raise IntegrationError(f"mode {h} integration failed: {sol.message}", last)
    return ModeTrajectory(
        mode=h,
        omega0=omega0,
        t=sol.t / omega0,
        Q=sol.y[0],
        Qdot=omega0 * sol.y[1],
        nfev=sol.nfev,
    )


def extract_AB_numeric(traj: ModeTrajectory, omega0_h: float, t_f: float):
    """Project the state at t_f onto A e^{i omega0 t} + B e^{-i omega0 t} (physical units)."""
    if abs(traj.t[-1] - t_f) > 1e-9 * max(t_f, 1e-300):
        raise ValueError(f"trajectory ends at {traj.t[-1]:.6e} s, not at t_f = {t_f:.6e} s")
    Q = traj.norm * traj.Q[-1]
    Qdot = traj.norm * traj.Qdot[-1]
    A = np.exp(-1j * omega0_h * t_f) * (Q + Qdot / (1j * omega0_h)) / 2
    B = np.exp(1j * omega0_h * t_f) * (Q - Qdot / (1j * omega0_h)) / 2
    return complex(A), complex(B)


def numeric_bogoliubov(
    spec: CircuitSpec,
    drive: DriveSpec,
    h: int,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    samples: int | np.ndarray = 512,
    initial_velocity: str = "continuity",
) -> tuple[BogoliubovResult, ModeTrajectory]:
    traj = integrate_mode(spec, drive, h, rtol, atol, samples, initial_velocity)
    A, B = extract_AB_numeric(traj, traj.omega0, drive.t_f)
    result = bogoliubov_from_AB(
        A,
        B,
        traj.omega0,
        mode=h,
        method=NUMERIC,
        tau=drive.tau,
        resonant=is_resonant(drive, traj.omega0),
    )
    return result, traj
