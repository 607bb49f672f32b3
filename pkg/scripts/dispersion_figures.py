"""Limiting dispersion scan: Im c0 and alpha0 Im c0 against alpha0, as CSV and SVG."""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from shearstab.orrsommerfeld import scan_growth
from shearstab.profiles import builtin_profile
from shearstab.svg import line_plot


@dataclass
class Config:
    profile: str = "exp_layer"
    alpha0_min: float = 0.5
    alpha0_max: float = 6.0
    n_points: int = 200
    out: str = "runs/dispersion"


def main(cfg: Config) -> dict:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    scan = scan_growth((cfg.alpha0_min, cfg.alpha0_max), cfg.n_points, builtin_profile(cfg.profile))
    scan.to_csv(out / "dispersion.csv", header=json.dumps(asdict(cfg)))
    (out / "fig_a.svg").write_text(line_plot(scan.alpha0, [scan.c0.imag], ["Im c0"], "growth per unit phase", "alpha0", "Im c0"))
    (out / "fig_b.svg").write_text(line_plot(scan.alpha0, [scan.re_lambda], ["alpha0 Im c0"], "temporal growth rate", "alpha0", "Re lambda"))
    summary = {"alpha_c": scan.alpha_c, "alpha_M": scan.alpha_M, "slope_sign_changes": scan.slope_sign_changes()}
    (out / "summary.json").write_text(json.dumps(summary, indent=2))
    return summary


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profile", default=Config.profile)
    ap.add_argument("--n-points", type=int, default=Config.n_points)
    ap.add_argument("--out", default=Config.out)
    a = ap.parse_args()
    print(json.dumps(main(Config(profile=a.profile, n_points=a.n_points, out=a.out)), indent=2))
