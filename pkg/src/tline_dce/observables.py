"""Particle numbers, mode energies and whole-spectrum sweeps."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import csv
import io
import math
import os

import numpy as np

from . import dynamics, lattice
from .constants import HBAR
from .errors import DomainError
from .lattice import CircuitFamily, CircuitSpec

SWEEP_HEADER = ("family", "j", "omega0", "epsilon_over_hbar", "Omega", "N", "log10N", "E_over_hbar", "method")
DISPERSION_HEADER = ("family", "j", "k_dx", "omega0", "epsilon_over_hbar")

LOG_DOMAIN_THRESHOLD = 300.0
FLOAT_FMT = "{:.11e}"

_LOG10_E = math.log10(math.e)


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return FLOAT_FMT.format(x)


def sinh2_with_log10(x: float) -> tuple[float, float]:
    """(sinh(x)^2, log10 sinh(x)^2), switching to the log domain for x > 300."""
    x = abs(float(x))
    if x == 0:
        return 0.0, -math.inf
    if x <= LOG_DOMAIN_THRESHOLD:
        n = math.sinh(x) ** 2
        return n, math.log10(n)
    # sinh(x)^2 = e^{2x} (1 - e^{-2x})^2 / 4
    log10n = (2 * x + 2 * math.log1p(-math.exp(-2 * x)) - 2 * math.log(2)) * _LOG10_E
    n = 10.0**log10n if log10n < 308 else math.inf
    return n, log10n


def particle_number_analytic(spec: CircuitSpec, h: int, tau: float) -> tuple[float, float]:
    """Resonant particle number at slow time ``tau`` and its log10."""
    if tau < 0:
        raise DomainError(f"slow time must be non-negative, got {tau!r}")
    return sinh2_with_log10(dynamics.growth_rate(spec, h) * tau)


def particle_number_numeric(
    spec: CircuitSpec,
    drive: dynamics.DriveSpec,
    h: int,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> float:
    result, _ = dynamics.numeric_bogoliubov(spec, drive, h, rtol=rtol, atol=atol, samples=2)
    return result.particle_number


def mode_energy(spec: CircuitSpec, h: int, N_h: float) -> float:
    """Energy released into mode h (J): eigenenergy times particle number."""
    if N_h < 0:
        raise DomainError(f"particle number must be non-negative, got {N_h!r}")
    return float(lattice.eigenenergy(spec, h)) * N_h


@dataclass(frozen=True)
class SweepRow:
    family: str
    j: int
    omega0: float
    epsilon_over_hbar: float
    Omega: float
    N: float
    log10N: float
    E_over_hbar: float
    method: str

    def as_strings(self) -> list[str]:
        return [
            self.family,
            str(self.j),
            format_float(self.omega0),
            format_float(self.epsilon_over_hbar),
            format_float(self.Omega),
            format_float(self.N),
            format_float(self.log10N),
            format_float(self.E_over_hbar),
            self.method,
        ]


def _trend(values: np.ndarray) -> str:
    d = np.diff(values)
    if np.all(d > 0):
        return "increasing"
    if np.all(d < 0):
        return "decreasing"
    return "none"


@dataclass(frozen=True)
class SweepResult:
    family: CircuitFamily
    tau: float
    rows: tuple[SweepRow, ...]
    eta: float | None = None
    extra: dict = field(default_factory=dict)

    def column(self, name: str, method: str | None = None) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows if method is None or r.method == method])

    @property
    def methods(self) -> list[str]:
        return sorted({r.method for r in self.rows})

    def monotonicity(self) -> dict[str, str]:
        """Trend of N_j over increasing j, per method."""
        return {m: _trend(self.column("N", m)) for m in self.methods}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in self.rows:
            writer.writerow(row.as_strings())
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "tau": self.tau,
            "eta": self.eta,
            "monotonicity": self.monotonicity(),
            "columns": list(SWEEP_HEADER),
            "rows": [row.as_strings() for row in self.rows],
        }


def _analytic_row(spec: CircuitSpec, j: int, tau: float) -> SweepRow:
    omega0 = float(lattice.dispersion(spec, j))
    eps = float(lattice.eigenenergy(spec, j)) / HBAR
    n, log10n = particle_number_analytic(spec, j, tau)
    return SweepRow(spec.family.value, int(j), omega0, eps, 2 * omega0, n, log10n, eps * n, dynamics.ANALYTIC)


def _numeric_row(args) -> SweepRow:
    spec, j, tau, eta, rtol, atol = args
    omega0 = float(lattice.dispersion(spec, j))
    eps = float(lattice.eigenenergy(spec, j)) / HBAR
    drive = dynamics.DriveSpec.resonant(spec, j, eta, tau=tau)
    n = particle_number_numeric(spec, drive, j, rtol, atol)
    log10n = math.log10(n) if n > 0 else -math.inf
    return SweepRow(spec.family.value, int(j), omega0, eps, drive.Omega, n, log10n, eps * n, dynamics.NUMERIC)


def worker_count() -> int:
    """Sweep parallelism, capped by TLINE_DCE_THREADS when set."""
    env = os.environ.get("TLINE_DCE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"TLINE_DCE_THREADS must be an integer, got {env!r}") from None
    return max(1, min(os.cpu_count() or 1, 8))


def sweep_spectrum(
    specs: list[CircuitSpec],
    tau: float,
    method: str = "analytic",
    *,
    eta: float = 0.01,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_modes: int | None = None,
    workers: int | None = None,
) -> dict[CircuitFamily, SweepResult]:
    """Drive every positive mode at its own resonance and record N_j and E_j at ``tau``.

    ``method`` is "analytic", "numeric" or "both".  ``max_modes`` caps the
    number of numerically integrated modes per family (lowest j first).
    """
    if method not in ("analytic", "numeric", "both"):
        raise ValueError(f"method must be analytic, numeric or both, got {method!r}")
    if tau < 0:
        raise DomainError(f"slow time must be non-negative, got {tau!r}")
    sizes = {s.N for s in specs}
    if len(sizes) > 1:
        raise ValueError(f"all circuits in a sweep must share N, got {sorted(sizes)}")

    results = {}
    jobs = []
    for spec in specs:
        js = spec.positive_indices
        rows = []
        if method in ("analytic", "both"):
            rows.extend(_analytic_row(spec, int(j), tau) for j in js)
        if method in ("numeric", "both"):
            numeric_js = js if max_modes is None else js[:max_modes]
            jobs.extend((spec, int(j), tau, eta, rtol, atol) for j in numeric_js)
        results[spec.family] = rows

    if jobs:
        n_workers = worker_count() if workers is None else workers
        if n_workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=n_workers) as pool:
                numeric_rows = list(pool.map(_numeric_row, jobs, chunksize=4))
        else:
            numeric_rows = [_numeric_row(job) for job in jobs]
        for row in numeric_rows:
            results[CircuitFamily(row.family)].append(row)

    return {
        fam: SweepResult(
            family=fam,
            tau=tau,
            eta=eta if method != "analytic" else None,
            rows=tuple(sorted(rows, key=lambda r: (r.j, r.method))),
        )
        for fam, rows in results.items()
    }


@dataclass(frozen=True)
class DispersionRow:
    family: str
    j: int
    k_dx: float
    omega0: float
    epsilon_over_hbar: float | None

    def as_strings(self) -> list[str]:
        eps = "" if self.epsilon_over_hbar is None else format_float(self.epsilon_over_hbar)
        return [self.family, str(self.j), format_float(self.k_dx), format_float(self.omega0), eps]


def dispersion_table(specs: list[CircuitSpec], include_eigenenergies: bool = True) -> list[DispersionRow]:
    """Frequencies and eigenenergies (over hbar) at E0, positive branch, per family."""
    rows = []
    for spec in specs:
        js = spec.positive_indices
        omega = np.asarray(lattice.dispersion(spec, js))
        eps = np.asarray(lattice.eigenenergy(spec, js)) / HBAR
        kdx = 2 * np.pi * js / spec.N
        for i, j in enumerate(js):
            rows.append(
                DispersionRow(
                    spec.family.value,
                    int(j),
                    float(kdx[i]),
                    float(omega[i]),
                    float(eps[i]) if include_eigenenergies else None,
                )
            )
    return rows


def dispersion_csv(rows: list[DispersionRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DISPERSION_HEADER)
    for row in rows:
        writer.writerow(row.as_strings())
    return buf.getvalue()
