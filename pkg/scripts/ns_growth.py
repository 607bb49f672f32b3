"""Time-stepped linearised Navier-Stokes growth compared with the dispersion relation across the band."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shearstab.grid import clustered_grid
from shearstab.orrsommerfeld import solve_viscous, unstable_band
from shearstab.profiles import builtin_profile
from shearstab.semigroup import ModeState, ns_trajectory


@dataclass
class Config:
    profile: str = "exp_layer"
    nu: float = 1e-6
    n_alpha: int = 5
    y_max: float = 40.0
    n_points: int = 2048


def main(cfg: Config):
    prof = builtin_profile(cfg.profile)
    band = unstable_band(cfg.nu, prof)
    y = clustered_grid(cfg.y_max, cfg.n_points, 0.05)
    for alpha in np.linspace(band.alpha_lo, band.alpha_hi, cfg.n_alpha + 2)[1:-1]:
        rate = alpha * solve_viscous(prof, alpha, cfg.nu).c.imag
        times = np.linspace(2.5 / rate, 5 / rate, 21)
        traj = ns_trajectory(prof, ModeState.from_vorticity(alpha, y, y * np.exp(-y)), cfg.nu, times, min(5.0, 0.5 / alpha))
        fit = np.polyfit(times, np.log([s.norms()["norm_omega_inf"] for s in traj]), 1)[0]
        print(f"alpha={alpha:.4f}: stepper {fit:.4e}  dispersion {rate:.4e}  gap {abs(fit - rate) / rate:.2%}")


if __name__ == "__main__":
    main(Config())
