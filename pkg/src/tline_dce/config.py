"""Run configuration: JSON file with unit-suffixed quantities, resolved to SI."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from pathlib import Path

from . import dynamics, lattice
from .errors import ConfigError
from .lattice import CircuitFamily, CircuitSpec
from .units import UnitError, format_quantity, parse_quantity

CIRCUIT_QUANTITIES = {
    "C": "capacitance",
    "C_J": "capacitance",
    "L": "inductance",
    "I_c": "current",
    "delta_x": "length",
}

DEFAULT_CONFIG = {
    "circuit": {
        "family": ["LHTL1", "LHTL2", "RHTL1", "RHTL2"],
        "N": 200,
        "C": "0.4 pF",
        "C_J": "0.02 pF",
        "L": "60 pH",
        "I_c": "1.25 uA",
        "delta_x": "1 m",
        "rhtl2_approx": False,
    },
    "drive": {
        "eta": 0.01,
        "resonant_with_mode": 1,
        "tau": "1 ps",
        "ramp": "hard",
    },
    "run": {
        "method": "analytic",
        "rtol": 1e-10,
        "atol": 1e-12,
        "output": "out",
        "format": "csv",
        "initial_velocity": "continuity",
        "max_modes": None,
    },
}


@dataclass
class DriveConfig:
    eta: float = 0.01
    Omega: float | None = None
    resonant_with_mode: int | None = 1
    t_f: float | None = None
    tau: float | None = 1e-12
    ramp: str = "hard"
    ramp_window: float = 0.0

    def resolve(self, spec: CircuitSpec) -> dynamics.DriveSpec:
        """DriveSpec for one circuit (Omega and t_f made explicit)."""
        if self.resonant_with_mode is not None:
            try:
                Omega = 2 * lattice.dispersion(spec, self.resonant_with_mode)
            except ValueError as exc:
                raise ConfigError(f"drive.resonant_with_mode: {exc}") from None
        else:
            Omega = self.Omega
        if self.t_f is not None:
            t_f = self.t_f
        elif self.eta == 0:
            raise ConfigError("drive.tau cannot fix t_f when eta = 0; give drive.t_f instead")
        else:
            t_f = self.tau / self.eta
        try:
            return dynamics.DriveSpec(
                eta=self.eta, Omega=Omega, t_f=t_f, ramp=self.ramp, ramp_window=self.ramp_window
            )
        except ValueError as exc:
            raise ConfigError(f"drive: {exc}") from None

    @property
    def slow_time(self) -> float:
        return self.tau if self.tau is not None else self.eta * self.t_f


@dataclass
class RunConfig:
    families: list[CircuitFamily]
    circuit: dict
    drive: DriveConfig
    method: str = "analytic"
    rtol: float = 1e-10
    atol: float = 1e-12
    output: str = "out"
    format: str = "csv"
    initial_velocity: str = "continuity"
    max_modes: int | None = None
    extra: dict = field(default_factory=dict)

    def specs(self) -> list[CircuitSpec]:
        try:
            return [CircuitSpec(family=f, **self.circuit) for f in self.families]
        except ValueError as exc:
            raise ConfigError(f"circuit: {exc}") from None

    def resolved(self) -> dict:
        """Fully resolved configuration with SI quantities, re-ingestible by :func:`load_config`."""
        circuit = {"family": [f.value for f in self.families], "N": self.circuit["N"]}
        for key, dim in CIRCUIT_QUANTITIES.items():
            circuit[key] = format_quantity(self.circuit[key], dim)
        circuit["rhtl2_approx"] = self.circuit["rhtl2_approx"]
        d = self.drive
        drive: dict = {"eta": d.eta, "ramp": d.ramp}
        if d.resonant_with_mode is not None:
            drive["resonant_with_mode"] = d.resonant_with_mode
        else:
            drive["Omega"] = format_quantity(d.Omega, "angular_frequency")
        if d.t_f is not None:
            drive["t_f"] = format_quantity(d.t_f, "time")
        else:
            drive["tau"] = format_quantity(d.tau, "time")
        if d.ramp == "cosine":
            drive["ramp_window"] = format_quantity(d.ramp_window, "time")
        run = {
            "method": self.method,
            "rtol": self.rtol,
            "atol": self.atol,
            "output": self.output,
            "format": self.format,
            "initial_velocity": self.initial_velocity,
            "max_modes": self.max_modes,
        }
        return {"circuit": circuit, "drive": drive, "run": run}


def _quantity(block: dict, key: str, dim: str, where: str) -> float:
    try:
        return parse_quantity(block[key], dim)
    except UnitError as exc:
        raise ConfigError(f"{where}.{key}: {exc}") from None


def _unknown_keys(block: dict, allowed, where: str) -> None:
    extra = set(block) - set(allowed)
    if extra:
        raise ConfigError(f"{where}: unknown field(s) {sorted(extra)}")


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a JSON object")
    _unknown_keys(data, ("circuit", "drive", "run"), "config")

    c = {**DEFAULT_CONFIG["circuit"], **data.get("circuit", {})}
    _unknown_keys(c, DEFAULT_CONFIG["circuit"], "circuit")
    fam = c["family"]
    fam_list = [fam] if isinstance(fam, str) else list(fam)
    try:
        families = [CircuitFamily.parse(f) for f in fam_list]
    except ValueError as exc:
        raise ConfigError(f"circuit.family: {exc}") from None
    if not families:
        raise ConfigError("circuit.family: at least one family required")
    if not isinstance(c["N"], int) or isinstance(c["N"], bool):
        raise ConfigError(f"circuit.N: expected an integer, got {c['N']!r}")
    circuit = {"N": c["N"], "rhtl2_approx": bool(c["rhtl2_approx"])}
    for key, dim in CIRCUIT_QUANTITIES.items():
        circuit[key] = _quantity(c, key, dim, "circuit")

    user_drive = data.get("drive", {})
    _unknown_keys(
        user_drive, ("eta", "Omega", "resonant_with_mode", "t_f", "tau", "ramp", "ramp_window"), "drive"
    )
    has_omega = "Omega" in user_drive
    has_mode = "resonant_with_mode" in user_drive
    if has_omega and has_mode:
        raise ConfigError("drive: give exactly one of Omega or resonant_with_mode")
    if "t_f" in user_drive and "tau" in user_drive:
        raise ConfigError("drive: give at most one of t_f or tau")
    d = dict(DEFAULT_CONFIG["drive"])
    if has_omega:
        d.pop("resonant_with_mode")
    if "t_f" in user_drive:
        d.pop("tau")
    d.update(user_drive)
    eta = d["eta"]
    if not isinstance(eta, (int, float)) or isinstance(eta, bool):
        raise ConfigError(f"drive.eta: expected a number, got {eta!r}")
    drive = DriveConfig(eta=float(eta), ramp=d.get("ramp", "hard"))
    if has_omega:
        drive.Omega = _quantity(d, "Omega", "angular_frequency", "drive")
        drive.resonant_with_mode = None
    else:
        mode = d["resonant_with_mode"]
        if not isinstance(mode, int) or isinstance(mode, bool):
            raise ConfigError(f"drive.resonant_with_mode: expected an integer, got {mode!r}")
        drive.resonant_with_mode = mode
    if "t_f" in d:
        drive.t_f = _quantity(d, "t_f", "time", "drive")
        drive.tau = None
    else:
        drive.tau = _quantity(d, "tau", "time", "drive")
    if "ramp_window" in d:
        drive.ramp_window = _quantity(d, "ramp_window", "time", "drive")

    r = {**DEFAULT_CONFIG["run"], **data.get("run", {})}
    _unknown_keys(r, DEFAULT_CONFIG["run"], "run")
    if r["method"] not in ("analytic", "numeric", "both"):
        raise ConfigError(f"run.method: expected analytic, numeric or both, got {r['method']!r}")
    if r["format"] not in ("csv", "json"):
        raise ConfigError(f"run.format: expected csv or json, got {r['format']!r}")
    for key in ("rtol", "atol"):
        if not isinstance(r[key], (int, float)) or not r[key] > 0:
            raise ConfigError(f"run.{key}: expected a positive number, got {r[key]!r}")
    return RunConfig(
        families=families,
        circuit=circuit,
        drive=drive,
        method=r["method"],
        rtol=float(r["rtol"]),
        atol=float(r["atol"]),
        output=r["output"],
        format=r["format"],
        initial_velocity=r["initial_velocity"],
        max_modes=r["max_modes"],
    )


def load_config(path: str | Path | None) -> RunConfig:
    """Read a JSON config; ``None`` gives the default circuit and drive."""
    if path is None:
        return parse_config({})
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(data)
