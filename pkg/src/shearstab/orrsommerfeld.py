"""Orr-Sommerfeld problem at large Reynolds number.

OS_{alpha,c,nu} psi = (U - c)(psi'' - alpha^2 psi) - U'' psi - eps (d^2 - alpha^2)^2 psi,
eps = nu / (i alpha).

Slow solutions are Rayleigh solutions continued below the critical point
(Lin's rule), with an Airy-type critical-layer corrector; fast solutions are
repeated Airy integrals in the variable gamma (y - y_c), gamma^3 = i alpha U'(y_c)/nu.

Matching the decaying slow and fast solutions at the wall gives the
dispersion relation.  In the variables alpha = nu^{1/4} alpha0, c = nu^{1/4} c0:

    finite nu:  U'(0) nu^{-1/4} [psi_s(0)/psi_s'(0) - Ai(2,-Z)/(gamma Ai(1,-Z))] = 0,  Z = gamma y_c
    nu -> 0:    alpha0 U_+^2 / U'(0) = c0 [1 - Ti(-Z e^{5 i pi/6})],
                Z = (i U'(0))^{1/3} alpha0^{1/3} c0 / U'(0).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq, minimize_scalar

from .collocation import collocation_spectrum
from .grid import GridFunction, ResolutionError
from .profiles import ShearProfile, critical_point
from .rayleigh import default_y_max, far_field_start, integrate_path
from .specialfn import airy_ai, airy_family_scaled, airy_repeated_integral, tietjens

__all__ = [
    "ViscousSpectralPoint",
    "OSBasis",
    "DispersionScan",
    "BandResult",
    "NoRootError",
    "BreakdownError",
    "AssemblyError",
    "IllConditionedError",
    "NearEigenvalueError",
    "fast_solution",
    "slow_solution",
    "lin_rayleigh",
    "dispersion_residual",
    "solve_dispersion",
    "solve_viscous",
    "scan_growth",
    "unstable_band",
    "eigenmode",
    "os_basis",
    "os_green_function",
    "collocation_spectrum",
]

_W = np.exp(2j * np.pi / 3)


class NoRootError(RuntimeError):
    pass


class BreakdownError(ArithmeticError):
    """The asymptotic slow-solution construction is not valid at this (alpha, c, nu)."""


class AssemblyError(ArithmeticError):
    pass


class IllConditionedError(ArithmeticError):
    pass


class NearEigenvalueError(ArithmeticError):
    pass


# --------------------------------------------------------------- spectral point


@dataclass(frozen=True)
class ViscousSpectralPoint:
    alpha: float
    c: complex
    nu: float
    epsilon: complex
    gamma: complex
    y_c: complex
    lam: complex

    @classmethod
    def build(cls, profile: ShearProfile, alpha: float, c: complex, nu: float) -> "ViscousSpectralPoint":
        if alpha <= 0 or nu <= 0:
            raise ValueError("alpha and nu must be positive")
        c = complex(c)
        y_c = critical_point(profile, c)
        g3 = 1j * alpha * complex(profile.deriv1(y_c)) / nu
        return cls(
            alpha=float(alpha),
            c=c,
            nu=float(nu),
            epsilon=nu / (1j * alpha),
            gamma=complex(g3 ** (1.0 / 3.0)),  # principal branch: arg gamma = pi/6 for real positive U'(y_c)
            y_c=y_c,
            lam=-1j * alpha * c,
        )


# --------------------------------------------------- Rayleigh part, Lin's rule


def _lin_geometry(y_c: complex):
    r = 0.5 * abs(y_c) + 1e-3
    h = max(0.0, -y_c.imag) + r
    return r, h


def lin_rayleigh(profile, alpha, c, y, y_max=None):
    """Decaying Rayleigh solution (psi, psi') on real points ``y``, e^{-alpha y} normalised.

    Values left of Re y_c are continued along a path passing below y_c, so that
    for Im c < 0 they carry the viscous (Lin) branch of the logarithm.
    """
    y = np.asarray(y, dtype=float)
    y_max = default_y_max(alpha) if y_max is None else y_max
    far = far_field_start(profile, max(y_max, float(y.max())))
    c = complex(c)
    y_c = critical_point(profile, c) if c != 0 else 0j
    psi = np.empty(y.size, dtype=complex)
    dpsi = np.empty(y.size, dtype=complex)
    beyond = y >= far
    psi[beyond] = np.exp(-alpha * y[beyond])
    dpsi[beyond] = -alpha * psi[beyond]
    e = np.exp(-alpha * far)
    state0 = [e, -alpha * e]
    below_axis = y_c.imag < 0
    split = y_c.real if below_axis else -np.inf
    right = (~beyond) & (y >= split)
    left = (~beyond) & (y < split)
    if right.any():
        pts = y[right][::-1]
        _, s = integrate_path(profile, alpha, c, [far, pts[-1]], state0, eval_last=pts)
        psi[right], dpsi[right] = s[0, ::-1], s[1, ::-1]
    if left.any():
        r, h = _lin_geometry(y_c)
        x1 = y_c.real + r
        st, _ = integrate_path(profile, alpha, c, [far, x1, complex(x1, -h), complex(0.0, -h), 0j], state0)
        pts = y[left]
        if pts[-1] > 0:
            _, s = integrate_path(profile, alpha, c, [0.0, pts[-1]], st, eval_last=pts)
            psi[left], dpsi[left] = s[0], s[1]
        else:
            psi[left], dpsi[left] = st[0], st[1]
    return psi, dpsi


def _lin_point(profile, alpha, c, y: float, growing: bool = False, y_max=None):
    """psi, psi', psi'' of a slow solution at one real point.

    ``growing=False``: decaying solution (e^{-alpha y} at infinity).
    ``growing=True``: the solution with psi(0) = 0, psi'(0) = 1 continued along Lin's path.
    """
    y_c = critical_point(profile, c)
    r, h = _lin_geometry(y_c)
    if growing:
        if y_c.imag < 0 and y > y_c.real:
            path = [0j, complex(0, -h), complex(y, -h), complex(y)]
        else:
            path = [0j, complex(y)]
        st, _ = integrate_path(profile, alpha, c, path, [0.0, 1.0]) if y > 0 else (np.array([0.0, 1.0], complex), None)
    else:
        psi, dpsi = lin_rayleigh(profile, alpha, c, np.array([y]), y_max)
        st = np.array([psi[0], dpsi[0]])
    q = alpha**2 + complex(profile.deriv2(y)) / (complex(profile.eval(y)) - c)
    return st[0], st[1], q * st[0]


def _rayleigh_third(profile, alpha, c, y, psi, dpsi):
    """psi''' of a Rayleigh solution from psi'' = (alpha^2 + U''/(U-c)) psi."""
    u, u1, u2 = complex(profile.eval(y)), complex(profile.deriv1(y)), complex(profile.deriv2(y))
    # d/dy [U''/(U - c)] with U''' by central difference of the analytic U''
    h = 1e-5
    u3 = (complex(profile.deriv2(y + h)) - complex(profile.deriv2(y - h))) / (2 * h)
    dq = u3 / (u - c) - u2 * u1 / (u - c) ** 2
    return dq * psi + (alpha**2 + u2 / (u - c)) * dpsi


# ----------------------------------------------------------- fast and slow


def fast_solution(profile, point: ViscousSpectralPoint, grid, growing: bool = False) -> GridFunction:
    """Leading-order fast solution Ai(2, gamma (y - y_c)) (decaying) on a real grid.

    ``growing=True`` returns Ai(2, e^{-2 i pi/3} gamma (y - y_c)), which grows with y.
    """
    y = np.asarray(grid, dtype=float)
    g = point.gamma
    if abs(g) < 10:
        raise ValueError(f"|gamma| = {abs(g):.3g} < 10: outside the asymptotic regime")
    near = np.abs(y - point.y_c.real) < 10.0 / abs(g)
    if y.size > 1:
        spacing = np.max(np.diff(y)[near[:-1]]) if near[:-1].any() else np.max(np.diff(y))
        if spacing > 1.0 / (8 * abs(g)):
            raise ResolutionError(f"grid spacing {spacing:.3g} does not resolve the fast scale 1/|gamma| = {1 / abs(g):.3g}")
    k = g * np.conj(_W) if growing else g
    z = k * (y - point.y_c)
    vals = airy_repeated_integral("Ai", 2, z)
    d1 = k * airy_repeated_integral("Ai", 1, z)
    return GridFunction(y, vals, point.alpha, meta={"dpsi": d1, "scale": k})


def _fast_derivs(point: ViscousSpectralPoint, y: float, growing: bool = False):
    k = point.gamma * (np.conj(_W) if growing else 1.0)
    z = k * (y - point.y_c)
    return (
        airy_repeated_integral("Ai", 2, z),
        k * airy_repeated_integral("Ai", 1, z),
        k**2 * airy_ai(z),
        k**3 * airy_ai(z, derivative=True),
    )


def _fast_scaled(point: ViscousSpectralPoint, y: float, growing: bool = False):
    """(zeta, e^{zeta} * _fast_derivs): the same four derivatives with the exponential factored out."""
    k = point.gamma * (np.conj(_W) if growing else 1.0)
    zeta, f = airy_family_scaled(k * (y - point.y_c))
    return zeta, f * k ** np.arange(4)


def slow_solution(profile, point: ViscousSpectralPoint | None, grid, alpha=None, c=None) -> GridFunction:
    """Decaying slow solution: Rayleigh psi_- plus a critical-layer corrector.

    The total vorticity in the layer solves eps (w'' - alpha^2 w) - (U - c) w = -U'' psi_R,
    matched to the Rayleigh vorticity U'' psi_R / (U - c) at the edges of a window of
    half-width 15/|gamma|; the corrector is twice integrated from the outer edge.
    Pass ``point=None`` with ``alpha``, ``c`` for the inviscid (eps = 0) case.
    """
    y = np.asarray(grid, dtype=float)
    if point is None:
        psi, dpsi = lin_rayleigh(profile, alpha, c, y)
        return GridFunction(y, psi, alpha, meta={"dpsi": dpsi, "corrector": np.zeros_like(psi)})
    if abs(point.epsilon) > 1e-2:
        raise BreakdownError(f"|eps| = {abs(point.epsilon):.2e} > 1e-2")
    a, c = point.alpha, point.c
    g = abs(point.gamma)
    half = 15.0 / g
    lo, hi = max(0.0, point.y_c.real - half), point.y_c.real + half
    n = int(np.clip(np.ceil((hi - lo) * g * 10), 200, 20000))
    yw = np.linspace(lo, hi, n)
    hw = yw[1] - yw[0]
    pr, _ = lin_rayleigh(profile, a, c, yw)
    u, u2 = profile.eval(yw) - c, profile.deriv2(yw)
    w_r = u2 * pr / u
    eps = point.epsilon
    # tridiagonal: eps (w_{j-1} - 2 w_j + w_{j+1})/h^2 - (u + eps a^2) w_j = -u2 psi_R
    m = n - 2
    ab = np.zeros((3, m), dtype=complex)
    ab[0, 1:] = eps / hw**2
    ab[2, :-1] = eps / hw**2
    ab[1, :] = -2 * eps / hw**2 - (u[1:-1] + eps * a**2)
    rhs = -u2[1:-1] * pr[1:-1]
    rhs[0] -= eps / hw**2 * w_r[0]
    rhs[-1] -= eps / hw**2 * w_r[-1]
    w = np.empty(n, dtype=complex)
    w[0], w[-1] = w_r[0], w_r[-1]
    w[1:-1] = solve_banded((1, 1), ab, rhs)
    wc = w - w_r
    # psi_c'' = wc with psi_c = psi_c' = 0 at the outer edge
    dpc = -np.concatenate([np.cumsum((0.5 * (wc[1:] + wc[:-1]) * hw)[::-1])[::-1], [0.0]])
    pc = -np.concatenate([np.cumsum((0.5 * (dpc[1:] + dpc[:-1]) * hw)[::-1])[::-1], [0.0]])
    if np.max(np.abs(pc)) > 10 * np.max(np.abs(pr)):
        raise BreakdownError("critical-layer corrector dominates the Rayleigh part")
    psi, dpsi = lin_rayleigh(profile, a, c, y)
    corr = np.interp(y, yw, pc.real) + 1j * np.interp(y, yw, pc.imag)
    dcorr = np.interp(y, yw, dpc.real) + 1j * np.interp(y, yw, dpc.imag)
    left = y < lo
    corr[left] = pc[0] + dpc[0] * (y[left] - lo)
    dcorr[left] = dpc[0]
    corr[y > hi] = 0.0
    dcorr[y > hi] = 0.0
    return GridFunction(y, psi + corr, a, meta={"dpsi": dpsi + dcorr, "corrector": corr, "rayleigh": psi})


# -------------------------------------------------------- dispersion relation


def _profile_constants(profile: ShearProfile):
    return float(profile.u_plus), float(np.real(profile.deriv1(0.0)))


def _limiting_residual(alpha0: float, c0: complex, profile: ShearProfile) -> complex:
    u_plus, s = _profile_constants(profile)
    z = (1j * s) ** (1.0 / 3.0) * alpha0 ** (1.0 / 3.0) * c0 / s
    ti = tietjens(-z * np.exp(5j * np.pi / 6))
    return alpha0 * u_plus**2 / s - c0 * (1.0 - ti)


def _finite_residual(alpha0: float, c0: complex, profile: ShearProfile, nu: float) -> complex:
    q = nu**0.25
    alpha, c = alpha0 * q, c0 * q
    y_c = critical_point(profile, c)
    y_max = default_y_max(alpha)
    far = far_field_start(profile, y_max)
    e = np.exp(-alpha * far)
    r, h = _lin_geometry(y_c)
    x1 = y_c.real + r
    st, _ = integrate_path(profile, alpha, c, [far, x1, complex(x1, -h), complex(0.0, -h), 0j], [e, -alpha * e])
    gamma = (1j * alpha * complex(profile.deriv1(y_c)) / nu) ** (1.0 / 3.0)
    z = gamma * y_c
    fast = airy_repeated_integral("Ai", 2, -z) / (gamma * airy_repeated_integral("Ai", 1, -z))
    _, s = _profile_constants(profile)
    return s / q * (st[0] / st[1] - fast)


def dispersion_residual(alpha0: float, c0: complex, profile: ShearProfile, nu: float = 0.0) -> complex:
    """LHS - RHS of the (rescaled) dispersion relation; ``nu = 0`` selects the limiting form."""
    if alpha0 <= 0:
        raise ValueError("alpha0 must be positive")
    if nu < 0:
        raise ValueError("nu must be non-negative")
    if nu == 0:
        return complex(_limiting_residual(alpha0, complex(c0), profile))
    return complex(_finite_residual(alpha0, complex(c0), profile, nu))


def _newton(f, c0: complex, tol: float = 1e-10, max_steps: int = 100) -> complex:
    c = complex(c0)
    fc = f(c)
    for _ in range(max_steps):
        if abs(fc) <= tol:
            return c
        h = 1e-7 * max(1.0, abs(c))
        df = (f(c + h) - f(c - h)) / (2 * h)
        if df == 0 or not np.isfinite(df):
            break
        step = -fc / df
        lam = 1.0
        while lam > 1e-6:
            trial = c + lam * step
            try:
                ft = f(trial)
            except (ArithmeticError, ValueError):
                ft = np.inf
            if np.isfinite(ft) and abs(ft) < abs(fc):
                break
            lam *= 0.5
        else:
            break
        c, fc = trial, ft
        if abs(lam * step) < 1e-15 * max(1.0, abs(c)):
            break
    if abs(fc) <= tol:
        return c
    raise NoRootError(f"Newton stalled at c0 = {c} with |residual| = {abs(fc):.3e}")


@lru_cache(maxsize=None)
def _reference_branch() -> tuple[np.ndarray, np.ndarray]:
    """Unstable root of the limiting relation for U_+ = U'(0) = 1 on a coarse alpha0 grid.

    Continuation starts from a rough guess at alpha0 = 2.7; every tabulated value
    is a converged root.
    """
    from .profiles import builtin_profile

    ref = builtin_profile("exp_layer")
    grid = np.concatenate([np.linspace(2.7, 0.05, 54), np.linspace(2.7, 12.0, 94)[1:]])
    roots = {}
    c = 3.0 + 0.5j
    for a in grid[:54]:
        c = _newton(lambda z: _limiting_residual(a, z, ref), c, tol=1e-12)
        roots[a] = c
    c = roots[2.7]
    for a in grid[54:]:
        c = _newton(lambda z: _limiting_residual(a, z, ref), c, tol=1e-12)
        roots[a] = c
    keys = np.array(sorted(roots))
    return keys, np.array([roots[k] for k in keys])


def _auto_seed(alpha0: float, profile: ShearProfile) -> complex:
    # exact scaling of the limiting relation in U_+ and U'(0)
    u_plus, s = _profile_constants(profile)
    m = s**1.25 * u_plus**-1.5
    k = s**0.25 * u_plus**0.5
    a, cs = _reference_branch()
    x = np.clip(alpha0 / m, a[0], a[-1])
    return k * complex(np.interp(x, a, cs.real), np.interp(x, a, cs.imag))


def solve_dispersion(alpha0: float, profile: ShearProfile, seed="auto", nu: float = 0.0, tol: float = 1e-10) -> complex:
    """Root c0 of the dispersion relation at alpha0 by damped complex Newton.

    For ``nu > 0`` the finite-nu relation is solved, seeded by the limiting root.
    """
    if not 0.1 <= alpha0 <= 10 and nu == 0:
        raise ValueError("alpha0 must lie in [0.1, 10]")
    if isinstance(seed, str):
        seed = _auto_seed(alpha0, profile)
        if nu > 0:
            seed = _newton(lambda z: _limiting_residual(alpha0, z, profile), seed, tol)
    return _newton(lambda z: dispersion_residual(alpha0, z, profile, nu), complex(seed), tol)


def solve_viscous(profile: ShearProfile, alpha: float, nu: float, seed="auto") -> ViscousSpectralPoint:
    """Finite-nu eigenpair at dimensional wavenumber alpha, as a spectral point."""
    q = nu**0.25
    c0 = solve_dispersion(alpha / q, profile, seed if isinstance(seed, str) else seed / q, nu)
    return ViscousSpectralPoint.build(profile, alpha, c0 * q, nu)


# -------------------------------------------------------------------- scans


@dataclass
class DispersionScan:
    alpha0: np.ndarray
    c0: np.ndarray
    alpha_c: float | None
    alpha_M: float
    c0_M: complex
    nu: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def re_lambda(self) -> np.ndarray:
        return self.alpha0 * self.c0.imag

    @property
    def rows(self):
        return list(zip(self.alpha0, self.c0, self.re_lambda))

    def slope_sign_changes(self) -> int:
        s = np.sign(np.diff(self.re_lambda))
        s = s[s != 0]
        return int(np.sum(s[1:] != s[:-1]))

    @property
    def unimodal(self) -> bool:
        return self.slope_sign_changes() == 1

    def to_csv(self, path=None, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            for line in header.splitlines():
                buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha0", "re_c0", "im_c0", "re_lambda"])
        for a, c, r in self.rows:
            w.writerow([f"{a:.12g}", f"{c.real:.12g}", f"{c.imag:.12g}", f"{r:.12g}"])
        if path is not None:
            Path(path).write_text(buf.getvalue())
        return buf.getvalue()


def scan_growth(alpha0_range, n_points: int, profile: ShearProfile, nu: float = 0.0) -> DispersionScan:
    """Continuation scan of c0(alpha0); alpha_c by bisection, alpha_M by golden section."""
    a_lo, a_hi = map(float, alpha0_range)
    if not (0.1 <= a_lo < a_hi <= 10):
        raise ValueError("alpha0 range must satisfy 0.1 <= lo < hi <= 10")
    if n_points < 50:
        raise ValueError("n_points must be at least 50")
    alphas = np.linspace(a_lo, a_hi, n_points)
    roots = np.empty(n_points, dtype=complex)
    seed = "auto"
    for i, a in enumerate(alphas):
        roots[i] = solve_dispersion(a, profile, seed, nu)
        seed = roots[i] if i == 0 else 2 * roots[i] - roots[i - 1]
    solve = lambda a: solve_dispersion(a, profile, _interp_seed(alphas, roots, a), nu)
    # neutral crossing
    im = roots.imag
    alpha_c = None
    idx = np.flatnonzero((im[:-1] < 0) & (im[1:] >= 0))
    if idx.size:
        j = idx[0]
        alpha_c = brentq(lambda a: solve(a).imag, alphas[j], alphas[j + 1], xtol=1e-12)
    # growth maximum
    growth = alphas * im
    j = int(np.argmax(growth))
    lo, hi = alphas[max(j - 1, 0)], alphas[min(j + 1, n_points - 1)]
    res = minimize_scalar(lambda a: -a * solve(a).imag, bounds=(lo, hi), method="bounded", options={"xatol": 1e-9})
    alpha_m = float(res.x)
    return DispersionScan(alphas, roots, alpha_c, alpha_m, solve(alpha_m), nu)


def _interp_seed(alphas, roots, a):
    return complex(np.interp(a, alphas, roots.real), np.interp(a, alphas, roots.imag))


@dataclass
class BandResult:
    """Unstable wavenumber interval [alpha_lo, alpha_hi] of the finite-nu relation."""

    nu: float
    alpha_lo: float | None
    alpha_hi: float | None
    alpha_max: float | None
    max_growth: float
    empty: bool

    def __iter__(self):
        return iter((self.alpha_lo, self.alpha_hi))


def unstable_band(nu: float, profile: ShearProfile, n_scan: int = 48, alpha0_span=None) -> BandResult:
    """Neutral points of Im c(alpha; nu) and the maximal growth alpha Im c inside the band.

    The scan runs in alpha0 = alpha nu^{-1/4} from 0.5 to 4 nu^{-1/12} (the upper
    edge moves out like nu^{1/6 - 1/4}), by continuation from the limiting root.
    """
    if not 1e-12 <= nu <= 1e-2:
        raise ValueError("nu must lie in [1e-12, 1e-2]")
    q = nu**0.25
    lo, hi = alpha0_span or (0.5, 4.0 * nu ** (-1.0 / 12.0))
    a0 = np.geomspace(lo, hi, n_scan)
    roots = np.full(n_scan, np.nan + 0j)
    start = int(np.argmin(np.abs(a0 - 2.7)))
    for order in (range(start, n_scan), range(start, -1, -1)):
        seed = "auto"
        prev = []
        for i in order:
            try:
                roots[i] = solve_dispersion(a0[i], profile, seed, nu)
            except (NoRootError, ArithmeticError, ValueError):
                break
            prev.append(roots[i])
            seed = prev[-1] if len(prev) < 2 else 2 * prev[-1] - prev[-2]
    ok = np.isfinite(roots)
    solve = lambda a: solve_dispersion(a, profile, _interp_seed(a0[ok], roots[ok], a), nu)
    im = np.where(ok, roots.imag, np.nan)
    pos = ok & (im > 0)
    if not pos.any():
        return BandResult(nu, None, None, None, 0.0, True)
    edges = []
    for j in range(n_scan - 1):
        if ok[j] and ok[j + 1] and (im[j] > 0) != (im[j + 1] > 0):
            edges.append(brentq(lambda a: solve(a).imag, a0[j], a0[j + 1], xtol=1e-10))
    first, last = np.flatnonzero(pos)[[0, -1]]
    a_lo = next((e for e in edges if e <= a0[first]), None)
    a_hi = next((e for e in edges if e >= a0[last]), None)
    growth = a0 * im
    j = int(np.nanargmax(np.where(pos, growth, -np.inf)))
    res = minimize_scalar(
        lambda a: -a * solve(a).imag,
        bounds=(a0[max(j - 1, 0)], a0[min(j + 1, n_scan - 1)]),
        method="bounded",
        options={"xatol": 1e-8},
    )
    # growth rate Re lambda = alpha Im c = nu^{1/2} alpha0 Im c0
    return BandResult(
        nu=nu,
        alpha_lo=None if a_lo is None else a_lo * q,
        alpha_hi=None if a_hi is None else a_hi * q,
        alpha_max=float(res.x) * q,
        max_growth=float(-res.fun) * q * q,
        empty=False,
    )


# ----------------------------------------------------------------- eigenmode


def eigenmode_grid(point: ViscousSpectralPoint, y_max: float = 40.0, per_layer: int = 24) -> np.ndarray:
    """Grid resolving the critical layer (spacing 1/(per_layer |gamma|)) and the outer scale."""
    g = abs(point.gamma)
    edge = max(point.y_c.real, 0.0) + 40.0 / g
    fine = np.linspace(0.0, edge, int(np.ceil(edge * g * per_layer)) + 1)
    coarse = np.geomspace(edge, max(y_max, 10.0 / point.alpha), 400)[1:]
    return np.concatenate([fine, coarse])


def eigenmode(profile, point: ViscousSpectralPoint, grid=None, bc_tol: float = 1e-6):
    """psi_lin = psi_s + a Ai(2, gamma (y - y_c)) with psi_s'(0) = U'(0) and a from psi(0) = 0.

    Returns (psi, u, v, omega) with u = psi', v = -i alpha psi, omega = -(psi'' - alpha^2 psi).
    """
    y = eigenmode_grid(point) if grid is None else np.asarray(grid, dtype=float)
    a_, c = point.alpha, point.c
    ps, dps = lin_rayleigh(profile, a_, c, y)
    s = complex(profile.deriv1(0.0))
    ps0, dps0 = lin_rayleigh(profile, a_, c, np.array([0.0]))
    norm = s / dps0[0]
    ps, dps = ps * norm, dps * norm
    z = point.gamma * (y - point.y_c)
    # beyond |z| = 60 on the decaying side the fast part is below double precision
    live = (np.abs(z) <= 60) | (y < point.y_c.real)
    f, df, d2f = (np.zeros(y.size, dtype=complex) for _ in range(3))
    f[live] = airy_repeated_integral("Ai", 2, z[live])
    df[live] = point.gamma * airy_repeated_integral("Ai", 1, z[live])
    d2f[live] = point.gamma**2 * airy_ai(z[live])
    f0 = airy_repeated_integral("Ai", 2, -point.gamma * point.y_c)
    amp = -ps0[0] * norm / f0
    psi = ps + amp * f
    u = dps + amp * df
    q = a_**2 + profile.deriv2(y) / (profile.eval(y) - c)
    d2 = q * ps + amp * d2f
    bc = max(abs(psi[0]), abs(u[0]) / abs(s))
    if y[0] != 0 or bc > bc_tol:
        raise AssemblyError(f"boundary conditions violated by {bc:.2e}")
    meta = {"amplitude": amp, "point": point}
    mk = lambda v: GridFunction(y, v, a_, meta=meta)
    return mk(psi), mk(u), mk(-1j * a_ * psi), mk(-(d2 - a_**2 * psi))


# ------------------------------------------------------------ Green function


@dataclass
class OSBasis:
    """Slow/fast decaying and growing solutions, evaluated at points on demand."""

    profile: ShearProfile
    point: ViscousSpectralPoint
    boundary: dict  # name -> (value, derivative) at y = 0

    def derivs(self, name: str, y: float) -> np.ndarray:
        """(phi, phi', phi'', phi''') of basis function ``name`` at real y."""
        p, pt = self.profile, self.point
        if name in ("s-", "s+"):
            psi, dpsi, d2 = _lin_point(p, pt.alpha, pt.c, y, growing=name == "s+")
            d3 = _rayleigh_third(p, pt.alpha, pt.c, y, psi, dpsi)
            return np.array([psi, dpsi, d2, d3])
        return np.array(_fast_derivs(pt, y, growing=name == "f+"))

    def ratio(self, name: str, y: float, ref: float) -> np.ndarray:
        """derivs(name, y) / phi(ref), formed without overflow for the fast pair."""
        if name in ("s-", "s+"):
            return self.derivs(name, y) / self.derivs(name, ref)[0]
        growing = name == "f+"
        zy, fy = _fast_scaled(self.point, y, growing)
        zr, fr = _fast_scaled(self.point, ref, growing)
        return fy / fr[0] * np.exp(zr - zy)


def os_basis(profile, point: ViscousSpectralPoint) -> OSBasis:
    b = OSBasis(profile, point, {})
    for name in ("s-", "f-"):
        d = b.derivs(name, 0.0)
        b.boundary[name] = (d[0], d[1])
    return b


def os_green_function(profile, point: ViscousSpectralPoint, x: float, y, derivative: int = 0, basis: OSBasis | None = None):
    """Green function G(x, y) of OS_{alpha,c,nu} (in y) with G = dG/dy = 0 at y = 0.

    G = G_i + G_b.  G_i uses the decaying pair above x and the growing pair
    below, each normalised by its value at x, with coefficients from the 4x4
    jump system M v = (0, 0, 0, -1/eps).  G_b = d_s phi_{s,-} + d_f phi_{f,-}/phi_{f,-}(0)
    removes the wall values.  ``derivative`` selects d^k/dy^k, k <= 3, taken
    from the y > x side when y == x.
    """
    basis = basis or os_basis(profile, point)
    eps = point.epsilon
    names_dec, names_gro = ("s-", "f-"), ("s+", "f+")
    # every basis function is normalised by its value at x
    at_x = {n: basis.ratio(n, x, x) for n in names_dec + names_gro}
    M = np.empty((4, 4), dtype=complex)
    for j, n in enumerate(names_dec):
        M[:, j] = at_x[n]
    for j, n in enumerate(names_gro):
        M[:, 2 + j] = -at_x[n]
    cond = np.linalg.cond(M)
    if cond > 1e12:
        raise IllConditionedError(f"jump matrix condition number {cond:.2e}")
    v = np.linalg.solve(M, np.array([0, 0, 0, -1.0 / eps], dtype=complex))

    def g_int(yy, k):
        names, coef = (names_dec, v[:2]) if yy >= x else (names_gro, v[2:])
        return sum(cf * basis.ratio(n, yy, x)[k] for cf, n in zip(coef, names))

    # wall correction G_b = d_s phi_{s,-} + d_f phi_{f,-} / phi_{f,-}(0)
    gi0 = np.array([g_int(0.0, 0), g_int(0.0, 1)])
    (s0, ds0), (f0, df0) = basis.boundary["s-"], basis.boundary["f-"]
    N = np.array([[s0, 1.0], [ds0, df0 / f0]], dtype=complex)
    det = np.linalg.det(N)
    if abs(det) < 1e-10:
        raise NearEigenvalueError(f"|det N| = {abs(det):.2e}: point close to an eigenvalue")
    d = np.linalg.solve(N, -gi0)

    def g(yy):
        gb = d[0] * basis.derivs("s-", yy)[derivative] + d[1] * basis.ratio("f-", yy, 0.0)[derivative]
        return g_int(yy, derivative) + gb

    ys = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.array([g(float(t)) for t in ys])
    return complex(out[0]) if np.ndim(y) == 0 else out
