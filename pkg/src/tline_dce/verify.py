"""Self-check suite run by ``tline-dce verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics, observables, quantization
from .lattice import CircuitSpec


@dataclass(frozen=True)
class Check:
    name: str
    family: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<14} {self.family:<6} residual={self.residual:.3e} tol={self.tolerance:.1e}"


def _band_edge_free(modes: quantization.ModeSet, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=modes.size) + 1j * rng.normal(size=modes.size)
    a[modes.index(-(modes.spec.N // 2))] = 0
    return a


def quantization_checks(spec: CircuitSpec, chi_scale: float = 1.0, n_states: int = 10, seed: int = 0) -> list[Check]:
    modes = quantization.build_modes(spec)
    fam = spec.family.value
    delta = quantization.periodic_delta(spec.N, modes.j[:, None], modes.j[None, :])

    norm_res = np.max(np.abs(quantization.normalization_matrix(modes) - delta))

    comm = quantization.commutator_matrix(modes, chi=modes.chi * chi_scale)
    # scale each row by chi_j so every entry is compared at unit magnitude
    comm_res = np.max(np.abs(modes.chi[:, None] * comm - delta))

    rng = np.random.default_rng(seed)
    rt_res = 0.0
    for _ in range(n_states):
        a = _band_edge_free(modes, rng)
        b = quantization.extract_amplitudes(modes, quantization.embed(modes, a))
        b[modes.index(-(spec.N // 2))] = 0
        rt_res = max(rt_res, np.max(np.abs(b - a)) / np.max(np.abs(a)))

    return [
        Check("normalization", fam, float(norm_res), 1e-12),
        Check("commutator", fam, float(comm_res), 1e-12),
        Check("round-trip", fam, float(rt_res), 1e-10),
    ]


def unitarity_check(spec: CircuitSpec, h: int, eta: float, tau: float, rtol: float, atol: float) -> list[Check]:
    drive = dynamics.DriveSpec.resonant(spec, h, eta, tau=tau)
    result, traj = dynamics.numeric_bogoliubov(spec, drive, h, rtol=rtol, atol=atol, samples=256)
    fam = spec.family.value
    return [
        Check("unitarity", fam, abs(result.unitarity - 1), 1e-8 * max(1.0, rtol / 1e-10)),
        Check("wronskian", fam, float(traj.wronskian_drift.max()), 10 * rtol),
    ]


def oracle_error(spec: CircuitSpec, h: int, eta: float, tau: float, rtol: float, atol: float) -> float:
    """Relative |N_numeric - N_analytic| / N_analytic on exact resonance."""
    n_an, _ = observables.particle_number_analytic(spec, h, tau)
    drive = dynamics.DriveSpec.resonant(spec, h, eta, tau=tau)
    n_num = observables.particle_number_numeric(spec, drive, h, rtol, atol)
    return abs(n_num - n_an) / n_an


def error_envelope(spec: CircuitSpec, h: int, eta: float, tau: float, rtol: float, atol: float) -> float:
    """Largest oracle error over four stop times a quarter drive period apart.

    The first-order truncation error oscillates with the drive phase at t_f;
    its envelope, not any single sample, scales linearly with eta.
    """
    omega0 = dynamics.lattice.dispersion(spec, h)
    quarter = np.pi / (4 * omega0)  # quarter period of the 2 omega0 drive
    return max(oracle_error(spec, h, eta, tau + m * eta * quarter, rtol, atol) for m in range(4))


def convergence_check(spec: CircuitSpec, h: int, tau: float, rtol: float, atol: float) -> list[Check]:
    checks = []
    envelopes = []
    for eta in (0.02, 0.01, 0.005):
        env = error_envelope(spec, h, eta, tau, rtol, atol)
        envelopes.append(env)
        checks.append(Check(f"oracle eta={eta:g}", spec.family.value, env, 5 * eta))
    mono = 0.0 if envelopes[0] > envelopes[1] > envelopes[2] else 1.0
    checks.append(Check("eta-monotone", spec.family.value, mono, 0.0))
    return checks


def run_all(
    specs: list[CircuitSpec],
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    chi_scale: float = 1.0,
    quantization_N: int = 64,
) -> list[Check]:
    """Quantization identities on a small ring, then ODE checks on mode N/4.

    The oracle runs at the slow time where the growth argument equals one.
    """
    checks: list[Check] = []
    for spec in specs:
        checks.extend(quantization_checks(spec.replace(N=quantization_N), chi_scale=chi_scale))
        h = spec.N // 4
        tau = 1.0 / dynamics.growth_rate(spec, h)
        checks.extend(unitarity_check(spec, h, 0.02, tau, rtol, atol))
        checks.extend(convergence_check(spec, h, tau, rtol, atol))
    return checks
