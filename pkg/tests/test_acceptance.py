"""Acceptance criteria AC1-AC9.

Each check returns a verdict line; the pytest wrappers print it unconditionally
and then assert.  Run ``python tests/test_acceptance.py`` for the lines alone.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np
import pytest

from shearstab import cascade as C
from shearstab import orrsommerfeld as O
from shearstab import rayleigh as R
from shearstab import semigroup as S
from shearstab import specialfn as sf
from shearstab.collocation import collocation_spectrum
from shearstab.grid import GridFunction, clustered_grid
from shearstab.profiles import builtin_profile

pytestmark = pytest.mark.slow

EXP = builtin_profile("exp_layer")
TANH = builtin_profile("tanh")
NUS = np.array([1e-4, 1e-6, 1e-8, 1e-10])


@dataclass
class Verdict:
    tag: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"{self.tag} {'PASS' if self.ok else 'FAIL'} ({self.seconds:.1f} s): {self.detail}"


def timed(tag):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            ok, detail = fn()
            return Verdict(tag, bool(ok), detail, time.perf_counter() - t0)

        run.__name__ = fn.__name__
        return run

    return wrap


def slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# ------------------------------------------------------------------- checks


@timed("AC1")
def ac1():
    t0 = time.perf_counter()
    scan = O.scan_growth((0.5, 6.0), 200, EXP)
    runtime = time.perf_counter() - t0
    changes = scan.slope_sign_changes()
    ok = 2.5 <= scan.alpha_M <= 3.1 and np.isfinite(scan.alpha_c) and scan.unimodal and runtime < 10
    return ok, (f"alpha_c={scan.alpha_c:.4f} alpha_M={scan.alpha_M:.4f} (target 2.8+-0.3) "
                f"slope sign changes={changes} (target 1) scan time={runtime:.2f}s (<10)")


@timed("AC2")
def ac2():
    t0 = time.perf_counter()
    bands = [O.unstable_band(n, TANH) for n in NUS]
    runtime = time.perf_counter() - t0
    if any(b.empty for b in bands):
        return False, "empty band in the sweep"
    lo = slope(NUS, [b.alpha_lo for b in bands])
    hi = slope(NUS, [b.alpha_hi for b in bands])
    gr = slope(NUS, [b.max_growth for b in bands])
    ok = abs(lo - 0.25) <= 0.03 and abs(hi - 1 / 6) <= 0.03 and abs(gr - 0.5) <= 0.05 and runtime < 120
    return ok, (f"tanh profile: lower-edge exponent {lo:.4f} (1/4+-0.03), upper-edge {hi:.4f} (1/6+-0.03), "
                f"growth {gr:.4f} (1/2+-0.05), sweep {runtime:.1f}s (<120)")


@timed("AC3")
def ac3():
    y = np.linspace(0, 15, 2048)
    state = S.ModeState.from_vorticity(0.5, y, np.exp(-((y - 1) ** 2) / 0.5))
    traj = S.euler_trajectory(TANH, state, np.geomspace(1, 100, 41), 0.25)
    rep = S.damping_diagnostics(traj, TANH)
    scaled = np.array([t1 * d for t1, t2, d in rep.cauchy if t1 <= 0.5 * t2])
    spread = float(scaled.max() / scaled.min())
    ok = abs(rep.decay_exponent + 1.0) <= 0.15 and spread <= 2.0
    return ok, (f"decay exponent {rep.decay_exponent:.4f} (-1+-0.15); "
                f"t1*|demod(100)-demod(t1)| in [{scaled.min():.3g}, {scaled.max():.3g}] for 20<=t1<=50, so C/t holds (spread {spread:.2f} <= 2)")


@timed("AC4")
def ac4():
    gaps = {}
    y = np.linspace(0, 20, 2048)
    times = [1.0, 5.0, 10.0]
    for profile in (TANH, EXP):
        state = S.ModeState.from_vorticity(0.5, y, np.exp(-((y - 1) ** 2) / 0.5))
        steps = S.euler_trajectory(profile, state, times, 0.05)
        contour = S.resolvent_contour_evolve(profile, 0.5, state, times, S.ContourSpec.rectangle(0.0, profile.u_plus))
        gaps[profile.name] = [float(np.max(np.abs(a.psi.values - b.values)) / a.psi.sup()) for a, b in zip(steps, contour)]
    worst = max(max(g) for g in gaps.values())
    detail = "; ".join(f"{k}: " + ", ".join(f"{g:.2e}" for g in v) for k, v in gaps.items())
    return worst <= 1e-3, f"relative gap at t=1,5,10 ({detail}), worst {worst:.2e} (<=1e-3)"


@timed("AC5")
def ac5():
    scan = O.scan_growth((0.5, 6.0), 200, EXP)
    errs = []
    for nu in (1e-4, 1e-6, 1e-8):
        q = nu**0.25
        target = q * scan.c0_M
        modes = collocation_spectrum(EXP, q * scan.alpha_M, nu).eigenvalues
        near = modes[np.argmin(np.abs(modes - target))]
        errs.append(abs(near - target) / abs(target))
    ok = errs[0] > errs[1] > errs[2]
    return ok, "relative errors at nu=1e-4,1e-6,1e-8: " + ", ".join(f"{e:.4f}" for e in errs) + " (strictly decreasing)"


def _d2(v, h):
    return (-v[4:] + 16 * v[3:-1] - 30 * v[2:-2] + 16 * v[1:-3] - v[:-4]) / (12 * h * h)


@timed("AC6")
def ac6():
    rng = np.random.default_rng(6)
    # Rayleigh: solve with the Green function, apply the operator, recover f
    y = np.linspace(0, 30, 2048)
    h = y[1] - y[0]
    ray_err = 0.0
    for profile, alpha, c in ((EXP, 0.5, 0.3 + 0.2j), (TANH, 0.7, 0.6 + 0.1j)):
        f = np.exp(-((y - 2) ** 2)) * (1 + 0.3j * y)
        psi = R.solve_rayleigh_bvp(profile, alpha, c, GridFunction(y, f, alpha)).values
        back = (profile.eval(y[2:-2]) - c) * (_d2(psi, h) - alpha**2 * psi[2:-2]) - profile.deriv2(y[2:-2]) * psi[2:-2]
        ray_err = max(ray_err, float(np.sqrt(np.trapezoid(np.abs(back - f[2:-2]) ** 2, y[2:-2]))))
    # Orr-Sommerfeld: wall, continuity and unit-jump conditions at random (x, point) pairs
    os_err = 0.0
    for _ in range(5):
        alpha = rng.uniform(0.06, 0.1)
        c = complex(rng.uniform(0.05, 0.1), rng.uniform(0.005, 0.02))
        x = rng.uniform(0.02, 3.0)
        pt = O.ViscousSpectralPoint.build(EXP, alpha, c, 1e-6)
        basis = O.os_basis(EXP, pt)
        g = lambda yy, k: O.os_green_function(EXP, pt, x, yy, k, basis=basis)
        left = np.nextafter(x, 0.0)
        checks = [abs(g(0.0, 0)), abs(g(0.0, 1))]
        for k in range(3):
            checks.append(abs(g(x, k) - g(left, k)) / max(1.0, abs(g(x, k))))
        checks.append(abs(-pt.epsilon * (g(x, 3) - g(left, 3)) - 1))
        os_err = max(os_err, max(checks))
    ok = ray_err <= 1e-4 and os_err <= 1e-6
    return ok, f"Rayleigh round-trip L2 error {ray_err:.2e} (<=1e-4); OS Green worst condition residual {os_err:.2e} over 5 random pairs (<=1e-6)"


@timed("AC7")
def ac7():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-12, 12, 100) + 1j * rng.uniform(-12, 12, 100)
    h = 1e-5
    ode = 0.0
    for z in pts:
        for fn in (sf.airy_ai, sf.airy_bi):
            d2 = (fn(z + h, True) - fn(z - h, True)) / (2 * h)
            scale = (1 + abs(z)) * max(abs(fn(z)), abs(fn(z, True)))
            ode = max(ode, abs(d2 - z * fn(z)) / scale)
    wr = max(abs(sf.airy_ai(z) * sf.airy_bi(z, True) - sf.airy_ai(z, True) * sf.airy_bi(z) - 1 / np.pi) for z in (0, 2, -3 + 1j))
    hd = 1e-4
    deriv = 0.0
    for z in pts[:40] * (8 / 12):
        for kind, base in (("Ai", sf.airy_ai), ("Bi", sf.airy_bi)):
            f1 = lambda s: sf.airy_repeated_integral(kind, 1, s)
            f2 = lambda s: sf.airy_repeated_integral(kind, 2, s)
            e1 = abs((f1(z + hd) - f1(z - hd)) / (2 * hd) - base(z)) / max(1, abs(base(z)))
            e2 = abs((f2(z + hd) - f2(z - hd)) / (2 * hd) - f1(z)) / max(1, abs(f1(z)))
            deriv = max(deriv, e1, e2)
    import oracles

    ti = abs(sf.tietjens(2.0) - oracles.tietjens(2.0))
    ok = ode <= 1e-8 and wr <= 1e-10 and deriv <= 1e-6 and ti <= 1e-8
    return ok, (f"ODE residual {ode:.1e} (<=1e-8, 100 points); Wronskian error {wr:.1e} (<=1e-10); "
                f"repeated-integral derivative error {deriv:.1e} (<=1e-6); Tietjens(2) error {ti:.1e} (<=1e-8)")


@timed("AC8")
def ac8():
    t0 = time.perf_counter()
    nu = C.NU
    identities = {
        F(13, 16): C.ScaleExpr(F(3, 4)) * nu ** F(1, 16),
        F(11, 16): C.ScaleExpr(F(3, 4)) / nu ** F(1, 16),
        F(5, 8): C.ScaleExpr(F(3, 4)) / C.rescale_viscosity(F(3, 4)) ** F(1, 2),
        F(-1, 4): C.reynolds_number(C.ScaleExpr(F(3, 4)), C.ONE, nu),
        F(1, 16): C.rescale_viscosity(F(3, 4)) ** F(1, 4),
        F(1, 32): C.saturation_amplitude("zero"),
    }
    exact = all(v.exponent == k and isinstance(v.exponent, F) for k, v in identities.items())
    reports = [C.cascade_report(1e-8, s) for s in ("euler_unstable", "euler_stable")]
    present = {e.expr.exponent for r in reports for e in r.entries}
    missing = [str(k) for k in identities if k not in present]
    runtime = time.perf_counter() - t0
    ok = exact and not missing and runtime < 1.0
    return ok, f"identities exact={exact}; report entries missing: {missing or 'none'}; {runtime * 1e3:.1f} ms"


@timed("AC9")
def ac9():
    nu = 1e-6
    band = O.unstable_band(nu, EXP)
    alpha = band.alpha_max
    pt = O.solve_viscous(EXP, alpha, nu)
    rate = alpha * pt.c.imag
    y = clustered_grid(40, 2048, 0.05)
    state = S.ModeState.from_vorticity(alpha, y, y * np.exp(-y))
    horizon = 5 / rate
    times = np.linspace(horizon / 2, horizon, 21)
    traj = S.ns_trajectory(EXP, state, nu, times, min(5.0, 0.5 / alpha))
    fit = float(np.polyfit(times, np.log([s.norms()["norm_omega_inf"] for s in traj]), 1)[0])
    err = abs(fit - rate) / rate
    return err <= 0.2, f"alpha={alpha:.4f} in band [{band.alpha_lo:.4f}, {band.alpha_hi:.4f}]: NS growth {fit:.4e} vs dispersion {rate:.4e}, error {err:.2%} (<=20%)"


CHECKS = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9]


@pytest.mark.parametrize("check", CHECKS, ids=[f"AC{i}" for i in range(1, 10)])
def test_acceptance(check, capsys):
    verdict = check()
    with capsys.disabled():
        print("\n" + verdict.line())
    assert verdict.ok, verdict.line()


if __name__ == "__main__":
    for check in CHECKS:
        print(check().line(), flush=True)
