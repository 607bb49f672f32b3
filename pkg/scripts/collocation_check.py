"""Collocation eigenvalues against the rescaled limiting dispersion root at the most unstable wavenumber."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from shearstab.collocation import collocation_spectrum
from shearstab.orrsommerfeld import scan_growth, solve_dispersion
from shearstab.profiles import builtin_profile


@dataclass
class Config:
    profile: str = "exp_layer"
    nus: list = field(default_factory=lambda: [1e-4, 1e-6, 1e-8])
    n: int = 200


def main(cfg: Config):
    prof = builtin_profile(cfg.profile)
    scan = scan_growth((0.5, 6.0), 200, prof)
    print(f"alpha_M = {scan.alpha_M:.5f}, c0(alpha_M) = {scan.c0_M:.6f}")
    for nu in cfg.nus:
        q = nu**0.25
        modes = collocation_spectrum(prof, q * scan.alpha_M, nu, n=cfg.n).eigenvalues
        target = q * scan.c0_M
        near = modes[np.argmin(np.abs(modes - target))]
        finite = q * solve_dispersion(scan.alpha_M, prof, nu=nu)
        print(f"nu={nu:.0e}: nearest mode {near:.6f}  limiting {target:.6f}  rel err {abs(near - target) / abs(target):.4f}  "
              f"finite-nu relation {finite:.6f}  most unstable retained {modes[0]:.6f}")


if __name__ == "__main__":
    main(Config())
