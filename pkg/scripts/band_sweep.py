"""Unstable band edges and peak growth over a viscosity sweep, with global and local exponents."""
from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from shearstab.orrsommerfeld import unstable_band
from shearstab.profiles import builtin_profile


@dataclass
class Config:
    profiles: tuple = ("tanh", "exp_layer")
    nus: list = field(default_factory=lambda: [1e-4, 1e-6, 1e-8, 1e-10, 1e-12])
    out: str = "runs/bands"


def fit(nus, vals):
    return float(np.polyfit(np.log(nus), np.log(vals), 1)[0])


def main(cfg: Config):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in cfg.profiles:
        bands = [unstable_band(n, builtin_profile(name)) for n in cfg.nus]
        with open(out / f"band_{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["nu", "alpha_lo", "alpha_hi", "alpha_max", "max_growth"])
            for b in bands:
                w.writerow([b.nu, b.alpha_lo, b.alpha_hi, b.alpha_max, b.max_growth])
        live = [b for b in bands if not b.empty]
        if len(live) < 2:
            print(f"{name}: fewer than two nonempty bands")
            continue
        nus = np.array([b.nu for b in live])
        print(f"{name}: lower {fit(nus, [b.alpha_lo for b in live]):.4f}  upper {fit(nus, [b.alpha_hi for b in live]):.4f}  "
              f"growth {fit(nus, [b.max_growth for b in live]):.4f}")
        for a, b in zip(live, live[1:]):
            pair = [a.nu, b.nu]
            print(f"  local {a.nu:.0e}-{b.nu:.0e}: lower {fit(pair, [a.alpha_lo, b.alpha_lo]):.4f}  "
                  f"upper {fit(pair, [a.alpha_hi, b.alpha_hi]):.4f}  growth {fit(pair, [a.max_growth, b.max_growth]):.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Config.out)
    main(Config(out=ap.parse_args().out))
