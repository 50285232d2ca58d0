"""Command-line front end writing CSV reports.

    edp spectrum     --system ho --q 2 --lambda -1 --n-max 3
    edp masses       --system ccbar --lambda 0 --lambda -0.2 --lambda -0.4
    edp fit          --system bbbar --lambda -0.6
    edp xform-check  --system hydrogen --k 2 --c 2

Flags override values from ``--config file.json``; ``--dump-config``
writes the merged settings back out so a run can be repeated exactly.
Exit status: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import core, quarkonia, xform
from .errors import EDPError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
XFORM_TOL = 1e-5
N_MAX_LIMIT = 10**6

SYSTEMS = ("ho", "hydrogen", "ccbar", "bbbar")
COMMANDS = ("spectrum", "masses", "fit", "xform-check")

DEFAULTS = {
    "q": 1.0,
    "lambda": [0.0],
    "hbar_omega": 1.0,
    "rydberg": 0.5,
    "quark_mass": None,
    "select": "experiment",
    "k": None,
    "c": None,
    "a": 0.0,
    "u_min": 0.2,
    "u_max": 5.0,
    "n_points": 49,
    "out": "-",
}
XFORM_DEFAULTS = {"ho": (2.0, 1.5), "hydrogen": (2.0, 2.0)}


class UsageError(Exception):
    pass


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{float(value):.9g}"


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    text = ",".join(header) + "\n" + "".join(",".join(fmt(v) for v in row) + "\n" for row in rows)
    if path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--system", choices=SYSTEMS)
        p.add_argument("--q", type=float)
        p.add_argument("--lambda", dest="lambda", type=float, action="append",
                       help="saturation parameter; repeat for several values")
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--quark-mass", dest="quark_mass", type=float)
        p.add_argument("--hbar-omega", dest="hbar_omega", type=float)
        p.add_argument("--rydberg", type=float)
        p.add_argument("--select", choices=("experiment", "continuation"))
        p.add_argument("--k", type=float)
        p.add_argument("--c", type=float)
        p.add_argument("--a", type=float)
        p.add_argument("--u-min", dest="u_min", type=float)
        p.add_argument("--u-max", dest="u_max", type=float)
        p.add_argument("--n-points", dest="n_points", type=int)
        p.add_argument("--out")
        p.add_argument("--config", help="JSON file with default values for the flags")
        p.add_argument("--dump-config", dest="dump_config", help="write the merged settings as JSON")
    return parser


def merge_config(args: argparse.Namespace) -> dict:
    """Defaults < config file < command-line flags."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        loaded = {k.replace("-", "_") if k != "lambda" else k: v for k, v in loaded.items()}
        if loaded.get("command", args.command) != args.command:
            raise UsageError(f"config is for command {loaded['command']!r}, not {args.command!r}")
        unknown = set(loaded) - set(DEFAULTS) - {"command", "system", "n_max"}
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key in ("config", "dump_config") or value is None:
            continue
        cfg[key] = value
    cfg["command"] = args.command

    if cfg.get("system") not in SYSTEMS:
        raise UsageError(f"--system is required (one of {', '.join(SYSTEMS)})")
    lam = cfg["lambda"]
    cfg["lambda"] = [float(v) for v in (lam if isinstance(lam, list) else [lam])]
    if not cfg["lambda"]:
        raise UsageError("at least one --lambda value is needed")
    if cfg.get("n_max") is None:
        cfg["n_max"] = 8 if cfg["system"] in ("ccbar", "bbbar") else 10
    if not 0 <= int(cfg["n_max"]) <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [0, {N_MAX_LIMIT}]")
    cfg["n_max"] = int(cfg["n_max"])
    if cfg["q"] < 0:
        raise UsageError("--q must be non-negative")
    return cfg


def _quarkonium_params(cfg: dict, lam: float) -> quarkonia.QuarkoniaParams:
    result = quarkonia.fit(cfg["system"], lam, quark_mass=cfg["quark_mass"], select=cfg["select"])
    return result.params


def run_spectrum(cfg: dict) -> int:
    if len(cfg["lambda"]) != 1:
        raise UsageError("spectrum takes a single --lambda")
    lam = cfg["lambda"][0]
    system = cfg["system"]
    if system == "ho":
        spec = core.BaseSpectrum("harmonic_oscillator", hbar_omega=cfg["hbar_omega"])
    elif system == "hydrogen":
        if cfg["n_max"] < 1:
            raise UsageError("hydrogen needs --n-max >= 1")
        spec = core.BaseSpectrum("hydrogen", rydberg=cfg["rydberg"])
    else:
        params = _quarkonium_params(cfg, lam)
        spec = core.BaseSpectrum("quarkonia", k2=params.k2, p2=params.p2)
    rows = core.spectrum_table(spec, core.SaturationModel(lam, cfg["q"]), cfg["n_max"])
    write_csv(
        cfg["out"],
        ["n", "base_energy", "energy", "valid", "branch"],
        [[r.n, r.base_energy, r.energy, r.valid, r.branch] for r in rows],
    )
    return EXIT_OK


def _require_quarkonium(cfg: dict) -> None:
    if cfg["system"] not in ("ccbar", "bbbar"):
        raise UsageError(f"{cfg['command']} needs --system ccbar or bbbar")


def run_masses(cfg: dict) -> int:
    _require_quarkonium(cfg)
    rows = quarkonia.mass_table(
        cfg["system"], cfg["lambda"], quark_mass=cfg["quark_mass"], n_max=cfg["n_max"], select=cfg["select"]
    )
    failed = [r for r in rows if not r.ok]
    for r in failed:
        print(f"edp: fit failed at lambda={r.lam}: {r.note}", file=sys.stderr)
    write_csv(
        cfg["out"],
        ["state", "lambda", "mass_GeV", "experimental_GeV", "deviation"],
        [[r.state, r.lam, r.mass, r.experimental, r.deviation] for r in rows if r.ok],
    )
    return EXIT_NUMERIC if len(failed) == len(cfg["lambda"]) else EXIT_OK


def run_fit(cfg: dict) -> int:
    _require_quarkonium(cfg)
    out = []
    for lam in cfg["lambda"]:
        try:
            f = quarkonia.fit(cfg["system"], lam, quark_mass=cfg["quark_mass"], select=cfg["select"])
        except EDPError as exc:
            print(f"edp: fit failed at lambda={lam}: {exc}", file=sys.stderr)
            continue
        out.append([f.system, f.lam, f.k2, f.p2, f.residuals[0], f.residuals[1], f.converged, f.n_roots])
    write_csv(
        cfg["out"],
        ["system", "lambda", "k_squared", "p_squared", "residual_1", "residual_2", "converged", "n_roots"],
        out,
    )
    return EXIT_OK if out else EXIT_NUMERIC


def run_xform_check(cfg: dict) -> int:
    system = cfg["system"]
    if system not in XFORM_DEFAULTS:
        raise UsageError("xform-check needs --system ho or hydrogen")
    if cfg["n_points"] < 8 or not cfg["u_min"] < cfg["u_max"] or cfg["u_min"] <= 0:
        raise UsageError("u grid needs n_points >= 8 and 0 < u_min < u_max")
    k0, c0 = XFORM_DEFAULTS[system]
    k = k0 if cfg["k"] is None else cfg["k"]
    c = c0 if cfg["c"] is None else cfg["c"]
    a = cfg["a"]
    if system == "ho":
        spec, closed = xform.oscillator_spec(k, c, a), xform.oscillator_closed_forms(k, c, a, mass=1.0)
    else:
        spec, closed = xform.hydrogen_spec(k, c, a), xform.hydrogen_closed_forms(k, c, a, mass=1.0)
    grid = np.linspace(cfg["u_min"], cfg["u_max"], cfg["n_points"])
    result = xform.split_potential_energy(spec, grid, mass=1.0)
    rows, dw, dv = [], 0.0, 0.0
    for u, w, v in zip(grid, result.W, result.v):
        wc, vc = closed["W"](u), closed["v"](u)
        dw, dv = max(dw, abs(w - wc)), max(dv, abs(v - vc))
        rows.append([u, w, wc, v, vc])
    write_csv(cfg["out"], ["u", "W_numeric", "W_closed", "v_numeric", "v_closed"], rows)
    e_closed = closed["E"]
    de = abs(result.E - e_closed) / max(1.0, abs(e_closed))
    ok = max(dw, dv, de) <= XFORM_TOL
    print(
        f"xform-check {system}: max|dW|={dw:.3e} max|dv|={dv:.3e} "
        f"E={result.E:.9g} E_closed={e_closed:.9g} rel_dE={de:.3e} {'PASS' if ok else 'FAIL'}",
        file=sys.stderr,
    )
    return EXIT_OK if ok else EXIT_NUMERIC


RUNNERS = {"spectrum": run_spectrum, "masses": run_masses, "fit": run_fit, "xform-check": run_xform_check}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = merge_config(args)
        if args.dump_config:
            dumped = {k: v for k, v in cfg.items() if k != "command"}
            dumped["command"] = cfg["command"]
            Path(args.dump_config).write_text(json.dumps(dumped, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return RUNNERS[cfg["command"]](cfg)
    except UsageError as exc:
        print(f"edp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EDPError, ArithmeticError, ValueError) as exc:
        print(f"edp: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
