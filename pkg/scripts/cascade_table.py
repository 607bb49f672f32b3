"""Print both scale-cascade tables at a chosen viscosity."""
from __future__ import annotations

import sys

from shearstab.cascade import cascade_report

if __name__ == "__main__":
    nu = float(sys.argv[1]) if len(sys.argv) > 1 else 1e-8
    for scenario in ("euler_unstable", "euler_stable"):
        print(f"== {scenario} at nu = {nu:g}")
        print(cascade_report(nu, scenario).to_text())
