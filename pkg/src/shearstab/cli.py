"""Command-line front end.

    shearstab <command> [--config FILE.json] [--out DIR] [--set key.path=value ...]

Commands: dispersion, spectrum, evolve, cascade, green, profile.  Every
command validates its whole configuration before computing.  Exit codes:
0 success, 2 configuration/validation error, 3 numerical failure.  The output
directory defaults to $SHEARSTAB_OUTPUT_DIR, else ./shearstab-out.
"""
from __future__ import annotations

import argparse
import copy
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .grid import GridSpec
from .profiles import ConfigurationError, HeatState, builtin_profile, heat_evolve

OUTPUT_ENV = "SHEARSTAB_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

DEFAULTS = {
    "dispersion": {
        "profile": {"name": "exp_layer", "u_plus": 1.0},
        "scan": {"alpha0_min": 0.5, "alpha0_max": 6.0, "n_points": 200, "nu": 0.0},
        "output": {"svg": True},
    },
    "spectrum": {
        "profile": {"name": "inflected", "u_plus": 1.0},
        "spectrum": {"method": "rayleigh", "alpha": 0.5, "region": [[0.0, 0.01], [1.0, 0.5]], "nu": 1e-6, "n": 200},
        "output": {"svg": False},
    },
    "evolve": {
        "profile": {"name": "tanh", "u_plus": 1.0},
        "evolve": {
            "mode": "euler",
            "alpha": 0.5,
            "nu": 1e-6,
            "t_final": 100.0,
            "dt": 0.25,
            "n_outputs": 41,
            "grid": {"y_max": 15.0, "n_points": 2048, "mapping": "uniform", "cluster": 1.0},
            "initial": {"center": 1.0, "width": 0.5},
            "contour": {"margin": 0.2, "height": 0.1},
            "checkpoints": [1.0, 5.0, 10.0],
        },
        "output": {"svg": True},
    },
    "cascade": {"cascade": {"scenario": "euler_unstable", "nu": 1e-8}, "output": {}},
    "green": {
        "profile": {"name": "exp_layer", "u_plus": 1.0},
        "green": {"operator": "rayleigh", "alpha": 0.5, "c": [0.5, 0.2], "nu": 1e-6, "x": [0.5, 1.0, 2.0], "y_max": 30.0, "n_points": 1025},
        "output": {},
    },
    "profile": {
        "profile": {"name": "exp_layer", "u_plus": 1.0},
        "heat": {"y_max": 30.0, "n_points": 2048, "dt": 1e-3, "steps": 1000, "scheme": "implicit"},
        "output": {},
    },
}


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ config


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _apply_set(cfg: dict, item: str) -> None:
    if "=" not in item:
        raise ConfigError(f"--set expects key.path=value, got {item!r}")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = cfg
    parts = key.split(".")
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot set {key}: {p} is not a block")
    node[parts[-1]] = value


def load_config(command: str, path=None, sets=()) -> dict:
    cfg = copy.deepcopy(DEFAULTS[command])
    if path:
        try:
            user = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config must be a JSON object")
        cfg = _merge(cfg, user)
    for s in sets:
        _apply_set(cfg, s)
    return cfg


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]


def _num(block, key, lo=None, hi=None, integer=False, lo_open=False):
    v = block.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise ConfigError(f"{key} must be a finite number")
    if integer and int(v) != v:
        raise ConfigError(f"{key} must be an integer")
    if lo is not None and (v < lo or (lo_open and v == lo)):
        raise ConfigError(f"{key} = {v} must be {'>' if lo_open else '>='} {lo}")
    if hi is not None and v > hi:
        raise ConfigError(f"{key} = {v} must be <= {hi}")
    return int(v) if integer else float(v)


def _complex(v, key):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"{key} must be a [re, im] pair")
    return complex(_num({"r": v[0]}, "r"), _num({"i": v[1]}, "i"))


def _profile(cfg):
    block = cfg.get("profile", {})
    try:
        return builtin_profile(block.get("name", ""), _num(block, "u_plus"))
    except ConfigurationError as exc:
        raise ConfigError(str(exc)) from exc


def validate(command: str, cfg: dict) -> dict:
    """Check every field the command uses; returns parsed parameters."""
    p = {}
    if command in ("dispersion", "spectrum", "evolve", "green", "profile"):
        p["profile"] = _profile(cfg)
    if command == "dispersion":
        s = cfg["scan"]
        p["lo"] = _num(s, "alpha0_min", 0.1, 10)
        p["hi"] = _num(s, "alpha0_max", 0.1, 10)
        if p["hi"] <= p["lo"]:
            raise ConfigError("empty scan range: alpha0_max must exceed alpha0_min")
        p["n"] = _num(s, "n_points", 50, 100000, integer=True)
        p["nu"] = _num(s, "nu", 0, 1e-2)
    elif command == "spectrum":
        s = cfg["spectrum"]
        p["method"] = s.get("method")
        if p["method"] not in ("rayleigh", "collocation"):
            raise ConfigError("spectrum.method must be 'rayleigh' or 'collocation'")
        p["alpha"] = _num(s, "alpha", 0, lo_open=True)
        if p["method"] == "rayleigh":
            reg = s.get("region")
            if not (isinstance(reg, list) and len(reg) == 2):
                raise ConfigError("spectrum.region must be [[re, im], [re, im]]")
            lo, hi = _complex(reg[0], "region[0]"), _complex(reg[1], "region[1]")
            if not (lo.real < hi.real and 1e-4 <= lo.imag < hi.imag):
                raise ConfigError("spectrum.region must be a proper rectangle with Im >= 1e-4")
            p["region"] = (lo, hi)
        else:
            p["nu"] = _num(s, "nu", 0, lo_open=True)
            p["n"] = _num(s, "n", 64, 1024, integer=True)
    elif command == "evolve":
        e = cfg["evolve"]
        p["mode"] = e.get("mode")
        if p["mode"] not in ("euler", "ns", "compare"):
            raise ConfigError("evolve.mode must be 'euler', 'ns' or 'compare'")
        p["alpha"] = _num(e, "alpha", 0, lo_open=True)
        p["t_final"] = _num(e, "t_final", 0, lo_open=True)
        p["dt"] = _num(e, "dt", 0, lo_open=True)
        p["n_outputs"] = _num(e, "n_outputs", 2, 100000, integer=True)
        if p["mode"] == "ns":
            p["nu"] = _num(e, "nu", 0, lo_open=True)
        g = e.get("grid", {})
        try:
            p["grid"] = GridSpec(_num(g, "y_max", 0, lo_open=True), _num(g, "n_points", 16, integer=True),
                                 g.get("mapping", "uniform"), float(g.get("cluster", 1.0))).nodes()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        umax = float(np.max(np.abs(p["profile"].eval(p["grid"]))))
        if p["alpha"] * umax * p["dt"] > 0.5:
            raise ConfigError("dt violates alpha * max|U| * dt <= 0.5")
        ini = e.get("initial", {})
        p["center"] = _num(ini, "center", 0)
        p["width"] = _num(ini, "width", 0, lo_open=True)
        if p["mode"] == "compare":
            c = e.get("contour", {})
            p["margin"] = _num(c, "margin", 0, lo_open=True)
            p["height"] = _num(c, "height", 1e-3)
            cps = e.get("checkpoints")
            if not (isinstance(cps, list) and cps):
                raise ConfigError("evolve.checkpoints must be a non-empty list")
            p["checkpoints"] = sorted(_num({"t": t}, "t", 0) for t in cps)
    elif command == "cascade":
        c = cfg["cascade"]
        p["scenario"] = c.get("scenario")
        if p["scenario"] not in ("euler_unstable", "euler_stable"):
            raise ConfigError(f"unknown scenario {p['scenario']!r}")
        p["nu"] = _num(c, "nu", 0, 1, lo_open=True)
        if p["nu"] == 1:
            raise ConfigError("nu must be < 1")
    elif command == "green":
        g = cfg["green"]
        p["operator"] = g.get("operator")
        if p["operator"] not in ("rayleigh", "os"):
            raise ConfigError("green.operator must be 'rayleigh' or 'os'")
        p["alpha"] = _num(g, "alpha", 0, lo_open=True)
        p["c"] = _complex(g.get("c"), "green.c")
        if p["operator"] == "rayleigh" and abs(p["c"].imag) < 1e-6:
            raise ConfigError("green.c must have |Im c| >= 1e-6 for the Rayleigh operator")
        if p["operator"] == "os":
            p["nu"] = _num(g, "nu", 0, lo_open=True)
        xs = g.get("x")
        if not (isinstance(xs, list) and xs):
            raise ConfigError("green.x must be a non-empty list")
        p["x"] = [_num({"x": x}, "x", 0, lo_open=True) for x in xs]
        p["y_max"] = _num(g, "y_max", 0, lo_open=True)
        p["n_points"] = _num(g, "n_points", 16, integer=True)
    elif command == "profile":
        h = cfg["heat"]
        p["y_max"] = _num(h, "y_max", 0, lo_open=True)
        p["n_points"] = _num(h, "n_points", 16, integer=True)
        p["dt"] = _num(h, "dt", 0, lo_open=True)
        p["steps"] = _num(h, "steps", 0, integer=True)
        p["scheme"] = h.get("scheme")
        if p["scheme"] not in ("implicit", "explicit"):
            raise ConfigError("heat.scheme must be 'implicit' or 'explicit'")
        hy = p["y_max"] / (p["n_points"] - 1)
        if p["scheme"] == "explicit" and p["dt"] / hy**2 > 0.5:
            raise ConfigError("explicit heat step violates dt/h^2 <= 1/2")
    return p


# ------------------------------------------------------------------ output


class Writer:
    def __init__(self, out: Path, cfg: dict, command: str):
        self.out = out
        self.tag = f"shearstab {__version__} {command} config={config_hash(cfg)}"
        self.written = []

    def text(self, name: str, body: str, comment: str = "#") -> None:
        (self.out / name).write_text(f"{comment} {self.tag}\n" + body)
        self.written.append(name)

    def json(self, name: str, obj: dict) -> None:
        obj = {"version": __version__, "config_hash": self.tag.rsplit("=", 1)[1], **obj}
        (self.out / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        self.written.append(name)

    def svg(self, name: str, body: str) -> None:
        (self.out / name).write_text(body)
        self.written.append(name)


def _bump(y, center, width):
    return np.exp(-((y - center) ** 2) / width)


# ---------------------------------------------------------------- commands


def cmd_dispersion(p, w: Writer, cfg):
    from .orrsommerfeld import scan_growth
    from .svg import line_plot

    scan = scan_growth((p["lo"], p["hi"]), p["n"], p["profile"], p["nu"])
    w.text("dispersion.csv", scan.to_csv())
    w.json("summary.json", {
        "alpha_c": scan.alpha_c,
        "alpha_M": scan.alpha_M,
        "c0_M": [scan.c0_M.real, scan.c0_M.imag],
        "slope_sign_changes": scan.slope_sign_changes(),
        "unimodal": scan.unimodal,
    })
    if cfg["output"].get("svg"):
        w.svg("fig_a.svg", line_plot(scan.alpha0, [scan.c0.imag], ["Im c0"], "Im c0 against alpha0", "alpha0", "Im c0", w.tag))
        w.svg("fig_b.svg", line_plot(scan.alpha0, [scan.re_lambda], ["Re lambda"], "alpha0 Im c0 against alpha0", "alpha0", "Re lambda", w.tag))


def cmd_spectrum(p, w: Writer, cfg):
    if p["method"] == "rayleigh":
        from .rayleigh import point_spectrum, spectrum_records

        cs = point_spectrum(p["profile"], p["alpha"], p["region"])
        recs = spectrum_records(p["profile"], p["alpha"], cs)
    else:
        from .collocation import collocation_spectrum

        res = collocation_spectrum(p["profile"], p["alpha"], p["nu"], n=p["n"])
        recs = [{"alpha": p["alpha"], "re_c": c.real, "im_c": c.imag, "nu": p["nu"]} for c in res.eigenvalues]
    w.json("spectrum.json", {"method": p["method"], "eigenvalues": recs})


def cmd_evolve(p, w: Writer, cfg):
    from . import semigroup as sg
    from .svg import line_plot

    y = p["grid"]
    state = sg.ModeState.from_vorticity(p["alpha"], y, _bump(y, p["center"], p["width"]))
    prof = p["profile"]
    summary = {"mode": p["mode"]}
    if p["mode"] == "compare":
        times = p["checkpoints"]
        steps = sg.euler_trajectory(prof, state, times, p["dt"])
        contour = sg.ContourSpec.rectangle(0.0, prof.u_plus, p["margin"], p["height"])
        res = sg.resolvent_contour_evolve(prof, p["alpha"], state, times, contour)
        gaps = [float(np.max(np.abs(s.psi.values - r.values)) / np.max(np.abs(s.psi.values))) for s, r in zip(steps, res)]
        summary.update({"checkpoints": times, "relative_gap": gaps, "max_relative_gap": max(gaps)})
        w.text("trajectory.csv", sg.trajectory_csv(steps))
    else:
        times = np.unique(np.concatenate([np.geomspace(1.0, p["t_final"], p["n_outputs"]), [p["t_final"]]])) \
            if p["t_final"] > 1 else np.linspace(0, p["t_final"], p["n_outputs"])[1:]
        if p["mode"] == "euler":
            traj = sg.euler_trajectory(prof, state, times, p["dt"])
        else:
            traj = sg.ns_trajectory(prof, state, p["nu"], times, p["dt"])
        w.text("trajectory.csv", sg.trajectory_csv(traj))
        if p["mode"] == "euler" and p["t_final"] >= 100:
            rep = sg.damping_diagnostics(traj, prof)
            summary.update({"decay_exponent": rep.decay_exponent, "cauchy_constant": rep.cauchy_constant})
        norms = [s.norms() for s in traj]
        summary["final_norms"] = norms[-1]
        if cfg["output"].get("svg"):
            ts = np.log10([n["t"] for n in norms])
            w.svg("norms.svg", line_plot(ts, [np.log10([n["norm_dpsi_inf"] for n in norms]), np.log10([n["norm_omega_inf"] for n in norms])],
                                         ["log |psi'|", "log |omega|"], "mode norms", "log10 t", "log10 norm", w.tag))
    w.json("summary.json", summary)


def cmd_cascade(p, w: Writer, cfg):
    from .cascade import cascade_report

    rep = cascade_report(p["nu"], p["scenario"])
    w.text("cascade.csv", rep.to_csv())
    w.text("cascade.txt", rep.to_text())


def cmd_green(p, w: Writer, cfg):
    y = np.linspace(0.0, p["y_max"], p["n_points"])
    rows = ["x,y,re_G,im_G"]
    if p["operator"] == "rayleigh":
        from .rayleigh import _green_basis, green_function

        basis = _green_basis(p["profile"], p["alpha"], p["c"], p["y_max"])
        for x in p["x"]:
            g = green_function(p["profile"], p["alpha"], p["c"], x, y, basis)
            rows += [f"{x:.10g},{a:.10g},{v.real:.12g},{v.imag:.12g}" for a, v in zip(y, g)]
    else:
        from .orrsommerfeld import ViscousSpectralPoint, os_basis, os_green_function

        pt = ViscousSpectralPoint.build(p["profile"], p["alpha"], p["c"], p["nu"])
        basis = os_basis(p["profile"], pt)
        for x in p["x"]:
            g = os_green_function(p["profile"], pt, x, y, basis=basis)
            rows += [f"{x:.10g},{a:.10g},{v.real:.12g},{v.imag:.12g}" for a, v in zip(y, g)]
    w.text("green.csv", "\n".join(rows) + "\n")


def cmd_profile(p, w: Writer, cfg):
    state = HeatState.from_profile(p["profile"], p["y_max"], p["n_points"])
    out = heat_evolve(state, p["dt"], p["steps"], p["scheme"])
    w.text("profile.csv", out.to_csv())


COMMANDS = {
    "dispersion": cmd_dispersion,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "cascade": cmd_cascade,
    "green": cmd_green,
    "profile": cmd_profile,
}


def _error(kind: str, msg: str, code: int) -> int:
    print(json.dumps({"status": "error", "kind": kind, "message": msg, "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="shearstab", description="Shear-layer stability experiments.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON config file; missing keys take defaults")
    ap.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./shearstab-out)")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config field, e.g. scan.n_points=400")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.command, args.config, args.set)
        params = validate(args.command, cfg)
    except (ConfigError, KeyError, TypeError) as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    out = Path(args.out or os.environ.get(OUTPUT_ENV) or "shearstab-out")
    out.mkdir(parents=True, exist_ok=True)
    w = Writer(out, cfg, args.command)
    try:
        COMMANDS[args.command](params, w, cfg)
    except (ArithmeticError, RuntimeError, ValueError, np.linalg.LinAlgError) as exc:
        return _error("numerical", f"{type(exc).__name__}: {exc}", EXIT_NUMERIC)
    print(json.dumps({"status": "ok", "command": args.command, "out": str(out), "files": w.written}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
