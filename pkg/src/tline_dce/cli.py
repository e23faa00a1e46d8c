"""Command-line front end: ``tline-dce {dispersion,evolve,sweep,verify}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import dynamics, lattice, observables, verify
from .config import RunConfig, load_config
from .errors import ConfigError, IntegrationError
from .lattice import CircuitFamily
from .observables import format_float

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3

TRAJECTORY_HEADER = ("t", "re_Q", "im_Q", "re_Qdot", "im_Qdot", "wronskian_drift")
BOGOLIUBOV_HEADER = (
    "family", "mode", "method", "Omega", "tau", "resonant",
    "re_alpha", "im_alpha", "re_beta", "im_beta", "N", "unitarity", "deviation",
)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "family", None):
        try:
            cfg.families = [CircuitFamily.parse(f) for f in args.family.split(",") if f.strip()]
        except ValueError as exc:
            raise ConfigError(f"--family: {exc}") from None
    if getattr(args, "method", None):
        cfg.method = args.method
    if getattr(args, "out", None):
        cfg.output = args.out
    if getattr(args, "format", None):
        cfg.format = args.format
    for key in ("rtol", "atol"):
        value = getattr(args, key, None)
        if value is not None:
            if not value > 0:
                raise ConfigError(f"--{key} must be positive")
            setattr(cfg, key, value)
    return cfg


def cmd_dispersion(cfg: RunConfig) -> int:
    specs = cfg.specs()
    rows = observables.dispersion_table(specs)
    out = Path(cfg.output)
    ir = {}
    for spec in specs:
        if spec.family is CircuitFamily.LHTL1:
            exact, approx = lattice.infrared_limit(spec)
            ir = {"exact": format_float(exact), "approx": format_float(approx)}
            print(f"LHTL1 infrared limit: exact={format_float(exact)} rad/s approx={format_float(approx)} rad/s")
    if cfg.format == "csv":
        _write(out / "dispersion.csv", observables.dispersion_csv(rows))
    else:
        payload = {
            "config": cfg.resolved(),
            "columns": list(observables.DISPERSION_HEADER),
            "rows": [r.as_strings() for r in rows],
            "infrared_limit": ir,
        }
        _write(out / "dispersion.json", _json_text(payload))
    return EXIT_OK


def _bogoliubov_row(spec, drive, result, deviation=None) -> list[str]:
    return [
        spec.family.value,
        str(result.mode),
        result.method,
        format_float(drive.Omega),
        format_float(result.tau),
        str(result.resonant).lower(),
        format_float(result.alpha.real),
        format_float(result.alpha.imag),
        format_float(result.beta.real),
        format_float(result.beta.imag),
        format_float(result.particle_number),
        format_float(result.unitarity),
        "" if deviation is None else format_float(deviation),
    ]


def _deviation(n_num: float, n_an: float) -> float:
    return abs(n_num - n_an) / n_an if n_an > 0 else abs(n_num - n_an)


def cmd_evolve(cfg: RunConfig) -> int:
    out = Path(cfg.output)
    mode = cfg.drive.resonant_with_mode or 1
    for spec in cfg.specs():
        drive = cfg.drive.resolve(spec)
        omega0 = lattice.dispersion(spec, mode)
        rows = []
        results = {}
        if cfg.method in ("analytic", "both"):
            results["analytic"] = dynamics.analytic_bogoliubov(spec, drive, mode)
        if cfg.method in ("numeric", "both"):
            num, traj = dynamics.numeric_bogoliubov(
                spec, drive, mode, rtol=cfg.rtol, atol=cfg.atol, initial_velocity=cfg.initial_velocity
            )
            results["numeric"] = num
            drift = traj.wronskian_drift
            traj_rows = [
                [format_float(t), format_float(q.real), format_float(q.imag),
                 format_float(qd.real), format_float(qd.imag), format_float(w)]
                for t, q, qd, w in zip(traj.t, traj.Q, traj.Qdot, drift)
            ]
            _write(out / f"trajectory_{spec.family.value}.csv", _csv_text(TRAJECTORY_HEADER, traj_rows))
        deviation = None
        if len(results) == 2:
            deviation = _deviation(results["numeric"].particle_number, results["analytic"].particle_number)
        for key, res in results.items():
            rows.append(_bogoliubov_row(spec, drive, res, deviation if key == "numeric" else None))
        summary = ", ".join(f"{k} N={format_float(r.particle_number)}" for k, r in results.items())
        extra = "" if deviation is None else f", deviation={format_float(deviation)}"
        print(f"{spec.family.value} mode {mode} (omega0={format_float(omega0)} rad/s): {summary}{extra}")
        if cfg.format == "csv":
            _write(out / f"bogoliubov_{spec.family.value}.csv", _csv_text(BOGOLIUBOV_HEADER, rows))
        else:
            payload = {"config": cfg.resolved(), "columns": list(BOGOLIUBOV_HEADER), "rows": rows}
            _write(out / f"bogoliubov_{spec.family.value}.json", _json_text(payload))
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    out = Path(cfg.output)
    sweeps = observables.sweep_spectrum(
        cfg.specs(),
        cfg.drive.slow_time,
        cfg.method,
        eta=cfg.drive.eta,
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_modes=cfg.max_modes,
    )
    summary = {}
    for fam in sorted(sweeps, key=lambda f: f.value):
        result = sweeps[fam]
        summary[fam.value] = result.monotonicity()
        if cfg.format == "csv":
            _write(out / f"sweep_{fam.value}.csv", result.to_csv())
        else:
            payload = {"config": cfg.resolved(), **result.to_dict()}
            _write(out / f"sweep_{fam.value}.json", _json_text(payload))
        trends = ", ".join(f"{m}: {t}" for m, t in summary[fam.value].items())
        print(f"{fam.value}: N_j {trends}")
    if cfg.format == "csv":
        _write(out / "sweep_summary.json", _json_text({"config": cfg.resolved(), "monotonicity": summary}))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, chi_scale: float = 1.0) -> int:
    checks = verify.run_all(cfg.specs(), rtol=cfg.rtol, atol=cfg.atol, chi_scale=chi_scale)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (default: C=0.4 pF, C_J=0.02 pF, L=60 pH, I_c=1.25 uA, N=200, tau=1 ps)")
    common.add_argument("--family", help="comma-separated circuit families, e.g. LHTL1,RHTL2")
    common.add_argument("--method", choices=("analytic", "numeric", "both"))
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--rtol", type=float)
    common.add_argument("--atol", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="tline-dce",
        description="Particle creation in SQUID-loaded left- and right-handed transmission lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dispersion", parents=[common], help="mode frequencies and eigenenergies")
    sub.add_parser("evolve", parents=[common], help="drive one mode and report Bogoliubov coefficients")
    sub.add_parser("sweep", parents=[common], help="resonant particle numbers for every mode")
    p_verify = sub.add_parser("verify", parents=[common], help="run the invariant checks")
    p_verify.add_argument("--inject-chi-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "dispersion":
            return cmd_dispersion(cfg)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_verify(cfg, chi_scale=args.inject_chi_scale)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FloatingPointError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
