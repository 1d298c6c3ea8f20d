"""Command-line front end: ``osc-circle <command> [flags]``.

Commands: spectrum, state, stats, squeeze, scan, verify.  Settings can come
from a flat ``key = value`` file (``--config``) whose keys are the long flag
names without dashes; flags given on the command line win.  Bare names of
the bundled configs (``fig2.cfg``, ``fig3.cfg``, ``fig4.cfg``) are found even
when no such file exists in the working directory.

Exit codes: 0 success, 1 a verification tolerance failed, 2 usage or invalid
parameters, 3 file I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ._errors import ConfigError, ConvergenceError, DomainError
from .algebra import CurvatureContext, energy_level
from .measure import MAX_MOMENT_ORDER, verify_moments
from .spectral import CircleGeometry, solve_spectrum_fd
from .states import DEFAULT_EPSILON, build_state
from .statistics import iter_scan, record_fields, squeezing

COMMANDS = ("spectrum", "state", "stats", "squeeze", "scan", "verify")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_DEFAULTS = {
    "lambda": "1",
    "z": "1",
    "phi": "0",
    "levels": "6",
    "nmax": "8",
    "epsilon": repr(DEFAULT_EPSILON),
    "rho-mode": "canonical",
    "tol": None,
    "format": "csv",
    "output": None,
    "pcount": "6",
    "grid": "4000",
    "spectrum": "false",
    "moments": "false",
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Axis:
    """Values along one scan axis, from ``v``, ``a,b,c`` or ``start:stop:count[:linear|log]``."""

    values: tuple[float, ...]

    @classmethod
    def parse(cls, text: str, name: str) -> "Axis":
        text = str(text).strip()
        try:
            if ":" in text:
                parts = text.split(":")
                if len(parts) not in (3, 4):
                    raise ValueError
                start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
                spacing = parts[3].strip().lower() if len(parts) == 4 else "linear"
                if count < 1 or start > stop:
                    raise UsageError(f"--{name}: need count >= 1 and start <= stop in {text!r}")
                if count == 1:
                    vals = [start]
                elif spacing == "linear":
                    vals = np.linspace(start, stop, count)
                elif spacing == "log":
                    if start <= 0:
                        raise UsageError(f"--{name}: log spacing needs start > 0")
                    vals = np.geomspace(start, stop, count)
                else:
                    raise UsageError(f"--{name}: spacing must be 'linear' or 'log'")
            else:
                vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise UsageError(f"--{name}: cannot parse {text!r}") from None
        vals = tuple(float(v) for v in vals)
        if not vals or not all(math.isfinite(v) for v in vals):
            raise UsageError(f"--{name}: values must be finite")
        return cls(vals)

    def scalar(self, name: str) -> float:
        if len(self.values) != 1:
            raise UsageError(f"--{name} must be a single value for this command")
        return self.values[0]


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    if not os.path.exists(path):
        name = os.path.basename(path)
        bundled = resources.files("osc_circle").joinpath("configs", name)
        if bundled.is_file():
            text = bundled.read_text()
        else:
            raise OSError(f"config file not found: {path}")
    else:
        with open(path) as fh:
            text = fh.read()
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("_", "-")
        if key != "command" and key not in _DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="osc-circle", description=__doc__.split("\n\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--lambda", dest="lambda_", metavar="AXIS", help="curvature 1/R^2 (value, list or start:stop:count[:log])")
    p.add_argument("--z", metavar="AXIS", help="real coherence amplitude z >= 0")
    p.add_argument("--phi", metavar="AXIS", help="quadrature angle in radians")
    p.add_argument("--levels", help="number of energy levels")
    p.add_argument("--nmax", help="highest moment order for verify (<= 12)")
    p.add_argument("--epsilon", help="relative tail-mass tolerance of the state truncation")
    p.add_argument("--rho-mode", choices=("canonical", "paper"))
    p.add_argument("--tol", help="verification tolerance")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--pcount", help="number of p(n) columns in stats/scan records")
    p.add_argument("--grid", help="interior grid points of the spectral oracle")
    p.add_argument("--spectrum", action="store_true", default=None, help="verify: run the spectral oracle")
    p.add_argument("--moments", action="store_true", default=None, help="verify: run the moment check")
    return p


def resolve_settings(ns: argparse.Namespace) -> tuple[str, dict[str, str]]:
    settings = {k: v for k, v in _DEFAULTS.items()}
    command = None
    if ns.config:
        file_settings = read_config(ns.config)
        command = file_settings.pop("command", None)
        settings.update(file_settings)
    flags = {
        "lambda": ns.lambda_, "z": ns.z, "phi": ns.phi, "levels": ns.levels, "nmax": ns.nmax,
        "epsilon": ns.epsilon, "rho-mode": ns.rho_mode, "tol": ns.tol, "format": ns.format,
        "output": ns.output, "pcount": ns.pcount, "grid": ns.grid,
        "spectrum": "true" if ns.spectrum else None, "moments": "true" if ns.moments else None,
    }
    settings.update({k: v for k, v in flags.items() if v is not None})
    command = ns.command or command
    if command is None:
        raise UsageError("no command given (positional argument or 'command' key in --config)")
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    if settings["format"] not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    return command, settings


def _int(settings, key):
    try:
        return int(settings[key])
    except (TypeError, ValueError):
        raise UsageError(f"--{key} must be an integer") from None


def _float(settings, key):
    try:
        return float(settings[key])
    except (TypeError, ValueError):
        raise UsageError(f"--{key} must be a number") from None


def _flag(settings, key) -> bool:
    return str(settings[key]).strip().lower() in ("1", "true", "yes", "on")


def format_value(v) -> str:
    """Shortest round-trip text for floats, plain text otherwise."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_records(records, fields, fmt: str, fh) -> None:
    """Stream records as CSV, or write them as a JSON array."""
    if fmt == "csv":
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for rec in records:
            writer.writerow([format_value(rec[f]) for f in fields])
    else:
        rows = [{f: _jsonable(rec[f]) for f in fields} for rec in records]
        fh.write(json.dumps(rows, indent=2))
        fh.write("\n")


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def _axes(settings):
    lam = Axis.parse(settings["lambda"], "lambda")
    z = Axis.parse(settings["z"], "z")
    phi = Axis.parse(settings["phi"], "phi")
    if min(lam.values) < 0 or min(z.values) < 0:
        raise UsageError("lambda and z must be >= 0")
    eps = _float(settings, "epsilon")
    if not 0.0 < eps < 1.0:
        raise UsageError("--epsilon must lie in (0, 1)")
    return lam, z, phi, eps


def cmd_spectrum(settings, out):
    lam = Axis.parse(settings["lambda"], "lambda").scalar("lambda")
    levels = _int(settings, "levels")
    if levels < 1:
        raise UsageError("--levels must be >= 1")
    ctx = CurvatureContext(lam)
    energies = energy_level(ctx, np.arange(levels))
    records = [{"lambda": lam, "n": n, "energy": float(e)} for n, e in enumerate(energies)]
    write_records(records, ["lambda", "n", "energy"], settings["format"], out)
    return EXIT_OK


def cmd_state(settings, out):
    lam_ax, z_ax, _, eps = _axes(settings)
    state = build_state(CurvatureContext(lam_ax.scalar("lambda")), z_ax.scalar("z"),
                        settings["rho-mode"], eps)
    if settings["format"] == "json":
        out.write(json.dumps(state.as_dict(), indent=2))
        out.write("\n")
    else:
        records = [{"n": n, "coeff": float(c)} for n, c in enumerate(state.coeffs)]
        write_records(records, ["n", "coeff"], "csv", out)
    return EXIT_OK


def cmd_scan(settings, out, single=False):
    lam, z, phi, eps = _axes(settings)
    if single:
        for axis, name in ((lam, "lambda"), (z, "z"), (phi, "phi")):
            axis.scalar(name)
    pcount = _int(settings, "pcount")
    if pcount < 0:
        raise UsageError("--pcount must be >= 0")
    workers = int(os.environ.get("OSC_CIRCLE_THREADS", "1") or 1)
    records = iter_scan(lam.values, z.values, phi.values, settings["rho-mode"], eps, pcount, workers)
    write_records(records, record_fields(pcount), settings["format"], out)
    return EXIT_OK


def cmd_squeeze(settings, out):
    lam, z, phi, eps = _axes(settings)
    state = build_state(CurvatureContext(lam.scalar("lambda")), z.scalar("z"), settings["rho-mode"], eps)
    fields = ["lambda", "z", "phi", "s1", "s2", "mean_a", "mean_a2", "mean_n"]
    records = []
    for p in phi.values:
        r = squeezing(state, p)
        records.append({"lambda": state.lam, "z": state.z, "phi": r.phi, "s1": r.s1, "s2": r.s2,
                        "mean_a": r.mean_a, "mean_a2": r.mean_a2, "mean_n": r.mean_n})
    write_records(records, fields, settings["format"], out)
    return EXIT_OK


def cmd_verify(settings, out):
    run_spectrum = _flag(settings, "spectrum")
    run_moments = _flag(settings, "moments")
    if not run_spectrum and not run_moments:
        run_spectrum = run_moments = True
    lams = Axis.parse(settings["lambda"], "lambda").values
    tol_given = settings["tol"] is not None
    report: dict = {"passed": True}
    if run_moments:
        tol = _float(settings, "tol") if tol_given else 1e-8
        nmax = _int(settings, "nmax")
        if not 0 <= nmax <= MAX_MOMENT_ORDER:
            raise UsageError(f"--nmax must lie in [0, {MAX_MOMENT_ORDER}]")
        reports = []
        for lam in lams:
            r = verify_moments(CurvatureContext(lam), settings["rho-mode"], nmax, tol)
            reports.append(r.as_dict())
            report["passed"] &= r.passed
        report["moments"] = reports
    if run_spectrum:
        tol = _float(settings, "tol") if tol_given else 1e-6
        levels = _int(settings, "levels")
        grid = _int(settings, "grid")
        reports = []
        for lam in lams:
            try:
                r = solve_spectrum_fd(CircleGeometry(lam), levels, grid)
            except ConvergenceError as exc:
                reports.append({"lambda": lam, "passed": False, "error": str(exc)})
                report["passed"] = False
                continue
            d = r.as_dict()
            d["tolerance"] = tol
            d["passed"] = bool(r.max_rel_error < tol)
            reports.append(d)
            report["passed"] &= d["passed"]
        report["spectrum"] = reports
    report["passed"] = bool(report["passed"])
    out.write(json.dumps(report, indent=2))
    out.write("\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "state": cmd_state,
    "stats": lambda s, o: cmd_scan(s, o, single=True),
    "squeeze": cmd_squeeze,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        command, settings = resolve_settings(ns)
        if settings["output"]:
            with open(settings["output"], "w", newline="") as fh:
                return _HANDLERS[command](settings, fh)
        return _HANDLERS[command](settings, stdout)
    except OSError as exc:
        print(f"osc-circle: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ConfigError, DomainError) as exc:
        print(f"osc-circle: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
