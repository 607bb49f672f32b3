"""Linearised Euler evolution of one Fourier mode: velocity decay and vorticity mixing."""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from shearstab.profiles import builtin_profile
from shearstab.semigroup import ModeState, damping_diagnostics, euler_trajectory, trajectory_csv
from shearstab.svg import line_plot


@dataclass
class Config:
    profile: str = "tanh"
    alpha: float = 0.5
    y_max: float = 15.0
    n_points: int = 2048
    dt: float = 0.25
    t_final: float = 100.0
    centers: tuple = (1.0, 2.0)  # vorticity bump centres; mixing is slow where U' is small
    width: float = 0.5
    out: str = "runs/damping"


def main(cfg: Config):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    prof = builtin_profile(cfg.profile)
    y = np.linspace(0, cfg.y_max, cfg.n_points)
    times = np.geomspace(1, cfg.t_final, 41)
    curves = []
    for y0 in cfg.centers:
        traj = euler_trajectory(prof, ModeState.from_vorticity(cfg.alpha, y, np.exp(-((y - y0) ** 2) / cfg.width)), times, cfg.dt)
        trajectory_csv(traj, out / f"trajectory_y0_{y0:g}.csv")
        rep = damping_diagnostics(traj, prof)
        print(f"bump at y={y0:g}: decay exponent {rep.decay_exponent:.3f}, Cauchy constant {rep.cauchy_constant:.3g}")
        curves.append(np.log10([cfg.alpha * s.norms()["norm_psi_inf"] + s.norms()["norm_dpsi_inf"] for s in traj]))
    (out / "velocity_decay.svg").write_text(
        line_plot(np.log10(times), curves, [f"y0={c:g}" for c in cfg.centers], "velocity decay", "log10 t", "log10 norm"))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Config.out)
    main(Config(out=ap.parse_args().out))
