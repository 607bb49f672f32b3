"""Rayleigh equation (U - c)(psi'' - alpha^2 psi) - U'' psi = 0 on the half line.

Solutions are obtained by DOP853 integration along piecewise-linear paths in
the complex y plane.  Near the critical point y_c (U(y_c) = c) the regular
solution is a Frobenius power series, and the singular one adds the
logarithmic term.  The log branch cut is the vertical half line from y_c
pointing away from the real axis, so real-axis values are the analytic
continuation that passes on the real-axis side of y_c.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .grid import GridFunction, ResolutionError
from .profiles import DomainError, ShearProfile, critical_point

__all__ = [
    "CriticalLayerSeries",
    "RayleighBasis",
    "NearEigenvalueError",
    "TruncationError",
    "PathError",
    "ContourResolutionError",
    "rayleigh_residual",
    "integrate_path",
    "critical_series",
    "regular_solution",
    "singular_solution",
    "decaying_pair",
    "decaying_at_wall",
    "green_function",
    "green_interior",
    "green_boundary",
    "solve_rayleigh_bvp",
    "point_spectrum",
    "rayleigh_criterion",
    "spectrum_records",
]

RTOL = 1e-11
ATOL = 1e-14
NEAR_REAL = 1e-6


class NearEigenvalueError(ArithmeticError):
    """psi_-(0, c) vanishes to working precision: c is (close to) an eigenvalue."""


class TruncationError(ValueError):
    pass


class PathError(ValueError):
    pass


class ContourResolutionError(RuntimeError):
    pass


# ------------------------------------------------------------------ helpers


def rayleigh_residual(profile: ShearProfile, alpha: float, c: complex, y, psi, psi_yy):
    """Pointwise (U - c)(psi'' - alpha^2 psi) - U'' psi."""
    y = np.asarray(y)
    return (profile.eval(y) - c) * (psi_yy - alpha**2 * psi) - profile.deriv2(y) * psi


def _rhs(profile: ShearProfile, alpha: float, c):
    """d/dy of (psi, psi') for one c or an array of c (state stacked [psi..., dpsi...])."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    m = c.size
    a2 = alpha**2

    def f(y, state):
        psi = state[:m]
        q = a2 + profile.deriv2(y) / (profile.eval(y) - c)
        return np.concatenate([state[m:], q * psi])

    return f


def integrate_path(profile, alpha, c, vertices, state0, eval_last=None, rtol=RTOL, atol=ATOL):
    """Carry (psi, psi') along the polygon ``vertices`` (complex y values).

    ``c`` may be an array (vectorised over spectral parameters).  If
    ``eval_last`` holds points on the final segment, the solution there is
    returned as well, as an array of shape (2m, len(eval_last)).
    """
    f = _rhs(profile, alpha, c)
    state = np.asarray(state0, dtype=complex)
    # linear problem: integrate an O(1) copy so atol stays meaningful
    scale = float(np.max(np.abs(state))) or 1.0
    state = state / scale
    vertices = [complex(v) for v in vertices]
    sampled = None
    for k in range(len(vertices) - 1):
        ya, yb = vertices[k], vertices[k + 1]
        d = yb - ya
        if d == 0:
            continue
        last = k == len(vertices) - 2
        t_eval = None
        if last and eval_last is not None:
            pts = np.asarray(eval_last, dtype=complex)
            t_eval = np.clip(np.real((pts - ya) / d), 0.0, 1.0)
        sol = solve_ivp(
            lambda s, u: d * f(ya + s * d, u),
            (0.0, 1.0),
            state,
            method="DOP853",
            rtol=rtol,
            atol=atol,
            t_eval=t_eval,
            # dense output between long steps is only ~1e-8 accurate; cap steps when sampling
            max_step=np.inf if t_eval is None else max(0.05 / abs(d), 1e-6),
        )
        if not sol.success:
            raise ArithmeticError(f"Rayleigh integration failed: {sol.message}")
        state = sol.y[:, -1]
        if t_eval is not None:
            sampled = sol.y * scale
    return state * scale, sampled


# ------------------------------------------------------ critical-layer series


@dataclass(frozen=True)
class CriticalLayerSeries:
    """psi^r(y) = sum_{n>=1} beta_n (y - y_c)^n, normalised by beta_1 = 1."""

    center: complex
    coefficients: np.ndarray  # beta_0 .. beta_{N-1}
    radius: float

    def __call__(self, y, derivative: int = 0):
        x = np.asarray(y, dtype=complex) - self.center
        b = self.coefficients
        n = np.arange(b.size)
        for _ in range(derivative):
            b = b[1:] * n[1:]
            n = n[:-1]
        return np.polynomial.polynomial.polyval(x, b)

    def tail_estimate(self, r: float | None = None) -> float:
        r = self.radius / 2 if r is None else r
        terms = np.abs(self.coefficients) * r ** np.arange(self.coefficients.size)
        return float(terms[-8:].sum())


def _series_radius(profile: ShearProfile, y_c: complex) -> float:
    return float(min(0.5 * profile.distance_to_singularity(y_c), 1.0))


def critical_series(profile: ShearProfile, alpha: float, c: complex, n_terms: int = 60) -> CriticalLayerSeries:
    """Frobenius coefficients of the regular solution about y_c."""
    y_c = critical_point(profile, c)
    radius = _series_radius(profile, y_c)
    fft_radius = min(0.8 * profile.distance_to_singularity(y_c), 1.6)
    a = profile.taylor(y_c, n_terms + 3, fft_radius)
    a[0] = 0.0  # U(y_c) - c
    b = np.array([(k + 2) * (k + 1) * a[k + 2] for k in range(n_terms)])
    beta = np.zeros(n_terms, dtype=complex)
    g = np.zeros(n_terms, dtype=complex)  # g_m = (m+2)(m+1) beta_{m+2} - alpha^2 beta_m
    beta[1] = 1.0
    # coefficient of x^N: sum_{k>=1} a_k g_{N-k} = sum_{k>=0} b_k beta_{N-k}
    for N in range(1, n_terms - 1):
        rhs = sum(b[k] * beta[N - k] for k in range(N))
        rhs -= sum(a[k] * g[N - k] for k in range(2, N + 1))
        g[N - 1] = rhs / a[1]
        beta[N + 1] = (g[N - 1] + alpha**2 * beta[N - 1]) / ((N + 1) * N)
    return CriticalLayerSeries(y_c, beta, radius)


def _real_sweep(profile, alpha, c, y, start_y, start_state):
    """Integrate from a real point outwards in both directions, sampling the grid ``y``."""
    out = np.full((2, y.size), np.nan, dtype=complex)
    right = y >= start_y
    left = ~right
    if right.any():
        yr = y[right]
        _, s = integrate_path(profile, alpha, c, [start_y, max(yr[-1], start_y)], start_state, eval_last=yr)
        out[:, right] = s if s is not None else start_state[:, None]
    if left.any():
        yl = y[left][::-1]
        _, s = integrate_path(profile, alpha, c, [start_y, yl[-1]], start_state, eval_last=yl)
        out[:, left] = s[:, ::-1]
    return out


def _continue_from_disk(profile, alpha, c, y, y_c, radius, local):
    """Values of the solution with local representation ``local(y) -> (psi, dpsi)`` on the grid."""
    values = np.empty((2, y.size), dtype=complex)
    inside = np.abs(y - y_c) < radius
    if inside.any():
        values[0, inside], values[1, inside] = local(y[inside])
    outside = ~inside
    if not outside.any():
        return values
    h = abs(y_c.imag)
    if h < radius:
        half = np.sqrt(radius**2 - h**2)
        for side, sel in ((1.0, outside & (y > y_c.real)), (-1.0, outside & (y < y_c.real))):
            if sel.any():
                start = y_c.real + side * half
                st = np.array(local(np.array([start])), dtype=complex).ravel()
                values[:, sel] = _real_sweep(profile, alpha, c, y[sel], start, st)
    else:
        # drop vertically from the disk towards the real axis, then sweep
        p = complex(y_c.real, y_c.imag - np.sign(y_c.imag) * radius)
        st = np.array(local(np.array([p])), dtype=complex).ravel()
        st, _ = integrate_path(profile, alpha, c, [p, y_c.real], st)
        values[:, outside] = _real_sweep(profile, alpha, c, y[outside], y_c.real, st)
    return values


def regular_solution(profile: ShearProfile, alpha: float, c: complex, grid) -> GridFunction:
    """Regular Rayleigh solution vanishing at y_c, with psi'(y_c) = 1."""
    y = np.asarray(grid, dtype=float)
    series = critical_series(profile, alpha, c)
    spacing = np.max(np.diff(y)) if y.size > 1 else 0.0
    if series.radius < spacing:
        raise ResolutionError(f"series radius {series.radius:.3g} below grid spacing {spacing:.3g}")
    local = lambda x: (series(x), series(x, 1))
    vals = _continue_from_disk(profile, alpha, c, y, series.center, series.radius, local)
    return GridFunction(y, vals[0], alpha, meta={"c": complex(c), "dpsi": vals[1], "y_c": series.center})


def _branch_log(x: np.ndarray, y_c: complex) -> np.ndarray:
    """log(x) with the cut along the vertical half line pointing away from the real axis."""
    cut = np.pi / 2 if y_c.imag >= 0 else -np.pi / 2
    phi = np.angle(x)
    arg = cut - np.mod(cut - phi, 2 * np.pi)
    return np.log(np.abs(x)) + 1j * arg


def singular_solution(profile, alpha, c, grid, y_star: complex | None = None) -> GridFunction:
    """psi^s = psi^r int_{y*}^y dz / psi^r(z)^2, unit Wronskian with psi^r.

    Near y_c, 1/psi^r^2 = sum_{m>=-2} e_m x^m with x = y - y_c; the x^{-1}
    term produces the logarithm, whose coefficient is stored as ``log_coefficient``.
    """
    y = np.asarray(grid, dtype=float)
    series = critical_series(profile, alpha, c)
    y_c, R = series.center, series.radius
    if y_star is None:
        y_star = y_c + R / 2
    y_star = complex(y_star)
    if abs(y_star - y_c) < 1e-3 * R:
        raise PathError("y_star too close to the critical point")
    if abs(y_c.imag) < 1e-14 and np.any(y < y_c.real) and y_star.real > y_c.real:
        raise PathError("real critical point: the real axis runs through the branch point")
    # Laurent series of 1/psi_r^2 = x^{-2} / (sum beta_{n+1} x^n)^2
    beta = series.coefficients[1:]
    n = beta.size
    sq = np.convolve(beta, beta)[:n]
    inv = np.zeros(n, dtype=complex)
    inv[0] = 1.0 / sq[0]
    for k in range(1, n):
        inv[k] = -np.dot(sq[1 : k + 1], inv[k - 1 :: -1][:k]) / sq[0]
    e_m2, e_m1, tail = inv[0], inv[1], inv[2:]

    def primitive(x):
        x = np.asarray(x, dtype=complex)
        k = np.arange(tail.size)
        poly = np.polynomial.polynomial.polyval(x, tail / (k + 1)) * x
        return -e_m2 / x + e_m1 * _branch_log(x, y_c) + poly

    if abs(y_star - y_c) >= R:
        raise PathError("y_star must lie inside the critical-layer disk")
    const = primitive(y_star - y_c)

    def local(yy):
        x = np.asarray(yy, dtype=complex) - y_c
        pr, dpr = series(yy), series(yy, 1)
        integral = primitive(x) - const
        return pr * integral, dpr * integral + 1.0 / pr

    vals = _continue_from_disk(profile, alpha, c, y, y_c, R, local)
    return GridFunction(
        y, vals[0], alpha,
        meta={"c": complex(c), "dpsi": vals[1], "y_c": y_c, "log_coefficient": e_m1, "y_star": y_star},
    )


# ----------------------------------------------------------- decaying basis


@dataclass
class RayleighBasis:
    """psi_- (decaying) and psi_+ (growing) with unit Wronskian psi_- psi_+' - psi_-' psi_+ = 1.

    ``psi_zero`` is the solution with psi_zero(0) = 0 normalised to the same
    Wronskian; psi_plus = psi_zero + k psi_minus.
    """

    alpha: float
    c: complex
    psi_minus: GridFunction
    psi_plus: GridFunction
    psi_zero: GridFunction
    dpsi_minus: np.ndarray
    dpsi_plus: np.ndarray
    dpsi_zero: np.ndarray
    boundary_minus: tuple[complex, complex]
    k: complex
    y_max: float
    log_branch_cut: str = "vertical half line from y_c pointing away from the real axis"

    @property
    def wronskian(self) -> np.ndarray:
        return self.psi_minus.values * self.dpsi_plus - self.dpsi_minus * self.psi_plus.values


def _check_far_field(profile: ShearProfile, y_max: float) -> None:
    gap = abs(complex(profile.eval(y_max)) - profile.u_plus)
    if gap > 1e-8:
        raise TruncationError(f"|U(Y_max) - U_+| = {gap:.2e} > 1e-8; increase Y_max")


def default_y_max(alpha: float) -> float:
    return float(max(30.0, 30.0 / alpha))


def far_field_start(profile: ShearProfile, y_max: float, tol: float = 1e-14) -> float:
    """Smallest y <= y_max beyond which |U - U_+| <= tol |U_+| (bisection on a monotone gap)."""
    gap = lambda y: abs(complex(profile.eval(y)) - profile.u_plus) - tol * abs(profile.u_plus)
    if gap(y_max) > 0:
        return y_max
    lo, hi = 0.0, y_max
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if gap(mid) > 0 else (lo, mid)
    return hi


def decaying_pair(profile, alpha, c, grid=None, y_max: float | None = None) -> RayleighBasis:
    """Decaying/growing Rayleigh pair on a real grid for c off the real range."""
    c = complex(c)
    if abs(c.imag) < NEAR_REAL:
        raise NearEigenvalueError("c within 1e-6 of the real axis: continuous spectrum")
    if y_max is None:
        y_max = float(grid[-1]) if grid is not None else default_y_max(alpha)
    _check_far_field(profile, y_max)
    y = np.linspace(0.0, y_max, 2049) if grid is None else np.asarray(grid, dtype=float)
    e = np.exp(-alpha * y_max)
    _, back = integrate_path(profile, alpha, c, [y_max, 0.0], [e, -alpha * e], eval_last=y[::-1])
    pm, dpm = back[0, ::-1], back[1, ::-1]
    w0 = pm[0]
    if abs(w0) < 1e-300:
        raise NearEigenvalueError("psi_-(0) underflow")
    _, fwd = integrate_path(profile, alpha, c, [0.0, y_max], [0.0, 1.0 / w0], eval_last=y)
    p0, dp0 = fwd
    # remove the e^{-alpha y} part of psi_0 where the flow is uniform
    u_gap = np.abs(profile.eval(y) - profile.u_plus)
    j = int(np.argmax(u_gap < 1e-10)) if np.any(u_gap < 1e-10) else y.size - 1
    ym = y[j]
    b = (alpha * p0[j] - dp0[j]) * np.exp(alpha * ym) / (2 * alpha)
    k = -b * np.exp(-alpha * ym) / pm[j]
    pp, dpp = p0 + k * pm, dp0 + k * dpm
    meta = {"c": c}
    return RayleighBasis(
        alpha=alpha,
        c=c,
        psi_minus=GridFunction(y, pm, alpha, meta=meta),
        psi_plus=GridFunction(y, pp, alpha, meta=meta),
        psi_zero=GridFunction(y, p0, alpha, meta=meta),
        dpsi_minus=dpm,
        dpsi_plus=dpp,
        dpsi_zero=dp0,
        boundary_minus=(complex(pm[0]), complex(dpm[0])),
        k=complex(k),
        y_max=y_max,
    )


def viscous_path(y_c: complex, y_max: float) -> list[complex]:
    """Path from Y_max to the wall passing below y_c (Lin's rule for U' > 0).

    For Im y_c > 0 the real axis already lies below; otherwise the path dips
    under the critical point.
    """
    r = 0.5 * abs(y_c) + 1e-3
    h = max(0.0, -y_c.imag) + r
    x1 = y_c.real + r
    if x1 >= y_max:
        raise PathError("critical point too far from the wall")
    return [complex(y_max), complex(x1), complex(x1, -h), complex(0.0, -h), 0j]


def decaying_at_wall(profile, alpha, c, y_max: float | None = None, path: str = "real"):
    """(psi_-(0), psi_-'(0)) for one or many c, with psi_- = e^{-alpha y} at Y_max.

    ``path="real"`` integrates along the real axis (vectorised over c);
    ``path="viscous"`` follows :func:`viscous_path` for a single c.
    """
    if y_max is None:
        y_max = default_y_max(alpha)
    # beyond the far-field point the decaying solution is exactly e^{-alpha y}
    y_max = far_field_start(profile, y_max)
    e = np.exp(-alpha * y_max)
    if path == "viscous":
        y_c = critical_point(profile, complex(c))
        st, _ = integrate_path(profile, alpha, complex(c), viscous_path(y_c, y_max), [e, -alpha * e])
        return complex(st[0]), complex(st[1])
    cs = np.atleast_1d(np.asarray(c, dtype=complex))
    m = cs.size
    state0 = np.concatenate([np.full(m, e, dtype=complex), np.full(m, -alpha * e, dtype=complex)])
    st, _ = integrate_path(profile, alpha, cs, [y_max, 0.0], state0, rtol=1e-10, atol=1e-14)
    if np.ndim(c) == 0:
        return complex(st[0]), complex(st[1])
    return st[:m], st[m:]


# --------------------------------------------------------- Green function


def _green_basis(profile, alpha, c, y_max=None, n=4097):
    y_max = default_y_max(alpha) if y_max is None else y_max
    basis = decaying_pair(profile, alpha, c, np.linspace(0.0, y_max, n), y_max)
    if abs(basis.boundary_minus[0]) < 1e-10:
        raise NearEigenvalueError(f"|psi_-(0, c)| = {abs(basis.boundary_minus[0]):.2e}: c near the point spectrum")
    return basis


def _interp(basis: RayleighBasis, which: str, x):
    y = basis.psi_minus.y
    v = getattr(basis, which).values
    return np.interp(x, y, v.real) + 1j * np.interp(x, y, v.imag)


def green_interior(profile, alpha, c, x, y, basis: RayleighBasis | None = None):
    """G_int(x, y) = -psi_-(max) psi_+(min) / (U(x) - c)."""
    basis = basis or _green_basis(profile, alpha, c)
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    return -_interp(basis, "psi_minus", hi) * _interp(basis, "psi_plus", lo) / (profile.eval(x) - c)


def green_boundary(profile, alpha, c, x, y, basis: RayleighBasis | None = None):
    """G_b(x, y) = (psi_+(0)/psi_-(0)) psi_-(x) psi_-(y) / (U(x) - c): restores G(x, 0) = 0."""
    basis = basis or _green_basis(profile, alpha, c)
    ratio = basis.psi_plus.values[0] / basis.psi_minus.values[0]
    return ratio * _interp(basis, "psi_minus", x) * _interp(basis, "psi_minus", y) / (profile.eval(x) - c)


def green_function(profile, alpha, c, x, y, basis: RayleighBasis | None = None):
    """Green function of Ray_{alpha,c} with G(x, 0) = 0 and decay in y.

    psi(y) = int G(x, y) f(x) dx solves Ray_{alpha,c} psi = f.  Evaluated
    from the tabulated basis (4097 points, linear interpolation between
    nodes); use :func:`solve_rayleigh_bvp` for accurate integrals.
    """
    if abs(complex(c).imag) < NEAR_REAL:
        raise NearEigenvalueError("c within 1e-6 of the real axis")
    basis = basis or _green_basis(profile, alpha, c)
    return green_interior(profile, alpha, c, x, y, basis) + green_boundary(profile, alpha, c, x, y, basis)


def _cumsimpson(v, x):
    """Cumulative integral from x[0] via the antiderivative of a not-a-knot cubic spline.

    Unlike cumulative Simpson, whose errors alternate between even and odd
    nodes, the result is smooth, so it can be differentiated on the grid.
    """
    return CubicSpline(x, v, axis=-1).antiderivative()(x)


def solve_rayleigh_bvp(profile, alpha, c, f: GridFunction, basis: RayleighBasis | None = None) -> GridFunction:
    """psi(y) = int_0^inf G(x, y) f(x) dx on the grid of ``f`` (cumulative Simpson).

    Equivalent form: psi = -psi_-(y) int_0^y psi_0 f/(U-c) - psi_0(y) int_y^inf psi_- f/(U-c).
    """
    c = complex(c)
    if abs(c.imag) < NEAR_REAL:
        raise NearEigenvalueError("c within 1e-6 of the real axis: continuous spectrum")
    y = f.y
    if basis is None:
        basis = decaying_pair(profile, alpha, c, y, float(y[-1]))
    if abs(basis.boundary_minus[0]) < 1e-10:
        raise NearEigenvalueError(f"|psi_-(0, c)| = {abs(basis.boundary_minus[0]):.2e}")
    g = f.values / (profile.eval(y) - c)
    pm, p0 = basis.psi_minus.values, basis.psi_zero.values
    inner = _cumsimpson(p0 * g, y)
    outer_all = _cumsimpson(pm * g, y)
    outer = outer_all[-1] - outer_all
    return f.with_values(-pm * inner - p0 * outer)


def solve_rayleigh_bvp_batch(profile, alpha, cs, f: GridFunction, rtol: float = 1e-10) -> np.ndarray:
    """``solve_rayleigh_bvp`` for many spectral parameters at once; returns shape (len(cs), len(f.y)).

    All parameters share one vectorised integration, which is what contour
    quadratures need.
    """
    cs = np.atleast_1d(np.asarray(cs, dtype=complex))
    if np.any(np.abs(cs.imag) < NEAR_REAL):
        raise NearEigenvalueError("c within 1e-6 of the real axis: continuous spectrum")
    y = f.y
    y_max = float(y[-1])
    _check_far_field(profile, y_max)
    m = cs.size
    e = np.exp(-alpha * y_max)
    ones = np.ones(m, dtype=complex)
    _, back = integrate_path(profile, alpha, cs, [y_max, 0.0], np.concatenate([e * ones, -alpha * e * ones]),
                             eval_last=y[::-1], rtol=rtol)
    pm = back[:m, ::-1]
    w0 = pm[:, 0]
    if np.any(np.abs(w0) < 1e-10):
        bad = cs[np.argmin(np.abs(w0))]
        raise NearEigenvalueError(f"|psi_-(0, c)| below 1e-10 at c = {bad}")
    _, fwd = integrate_path(profile, alpha, cs, [0.0, y_max], np.concatenate([0 * ones, ones]), eval_last=y, rtol=rtol)
    p0 = fwd[:m] / w0[:, None]
    g = f.values[None, :] / (profile.eval(y)[None, :] - cs[:, None])
    inner = _cumsimpson(p0 * g, y)
    outer_all = _cumsimpson(pm * g, y)
    return -pm * inner - p0 * (outer_all[:, -1:] - outer_all)


# ------------------------------------------------------------ point spectrum


def _winding(values: np.ndarray) -> float:
    ph = np.angle(np.concatenate([values, values[:1]]))
    d = np.diff(ph)
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(d.sum() / (2 * np.pi))


def _rectangle_path(lo: complex, hi: complex, n_side: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n_side, endpoint=False)
    a, b = lo, complex(hi.real, lo.imag)
    cc, d = hi, complex(lo.real, hi.imag)
    return np.concatenate([a + (b - a) * t, b + (cc - b) * t, cc + (d - cc) * t, d + (a - d) * t])


def _wall_values(profile, alpha, cs, y_max):
    out = np.empty(cs.size, dtype=complex)
    for i in range(0, cs.size, 256):
        out[i : i + 256] = decaying_at_wall(profile, alpha, cs[i : i + 256], y_max)[0]
    return out


def _count_zeros(profile, alpha, lo, hi, y_max, n_side=512, max_side=8192):
    prev = None
    while n_side <= max_side:
        vals = _wall_values(profile, alpha, _rectangle_path(lo, hi, n_side), y_max)
        w = _winding(vals)
        if abs(w - round(w)) <= 0.1 and prev is not None and round(w) == round(prev):
            return int(round(w))
        prev = w
        n_side *= 2
    raise ContourResolutionError(f"winding number did not stabilise on [{lo}, {hi}] (last {prev:.3f})")


def _newton_wall(profile, alpha, c0, y_max, tol=1e-12):
    c = complex(c0)
    for _ in range(60):
        h = 1e-7 * max(1.0, abs(c))
        f = decaying_at_wall(profile, alpha, c, y_max)[0]
        fp = (decaying_at_wall(profile, alpha, c + h, y_max)[0] - decaying_at_wall(profile, alpha, c - h, y_max)[0]) / (2 * h)
        step = f / fp
        c -= step
        if abs(step) < tol * max(1.0, abs(c)):
            return c
    return c


def point_spectrum(profile, alpha, region, y_max=None, n_side: int = 512, max_depth: int = 6):
    """Unstable Rayleigh eigenvalues c (psi_-(0, c) = 0) inside the rectangle ``region``.

    ``region = (c_lo, c_hi)`` are opposite corners with Im c_lo >= 1e-4.
    Zeros are counted by the argument principle, isolated by bisection and
    polished by Newton's method.
    """
    lo, hi = complex(region[0]), complex(region[1])
    if lo.imag > hi.imag or lo.real > hi.real:
        lo, hi = complex(min(lo.real, hi.real), min(lo.imag, hi.imag)), complex(max(lo.real, hi.real), max(lo.imag, hi.imag))
    if lo.imag < 1e-4:
        raise DomainError("region must stay at least 1e-4 above the real axis")
    y_max = default_y_max(alpha) if y_max is None else y_max
    found: list[complex] = []

    def search(a, b, depth):
        n = _count_zeros(profile, alpha, a, b, y_max, n_side)
        if n == 0:
            return
        if n == 1 or depth >= max_depth:
            z = _newton_wall(profile, alpha, 0.5 * (a + b), y_max)
            inside = a.real <= z.real <= b.real and a.imag <= z.imag <= b.imag
            if n == 1 and inside:
                found.append(z)
                return
            if depth >= max_depth:
                if inside:
                    found.append(z)
                return
        # split along the longer side
        if (b.real - a.real) >= (b.imag - a.imag):
            m = 0.5 * (a.real + b.real)
            search(a, complex(m, b.imag), depth + 1)
            search(complex(m, a.imag), b, depth + 1)
        else:
            m = 0.5 * (a.imag + b.imag)
            search(a, complex(b.real, m), depth + 1)
            search(complex(a.real, m), b, depth + 1)

    search(lo, hi, 0)
    unique: list[complex] = []
    for z in found:
        if all(abs(z - u) > 1e-8 for u in unique):
            unique.append(z)
    return sorted(unique, key=lambda z: -z.imag)


def spectrum_records(profile, alpha, cs, y_max=None) -> list[dict]:
    """JSON-ready records {alpha, re_c, im_c, residual} with residual = |psi_-(0, c)|."""
    y_max = default_y_max(alpha) if y_max is None else y_max
    recs = []
    for c in cs:
        r = abs(decaying_at_wall(profile, alpha, c, y_max)[0])
        recs.append({"alpha": float(alpha), "re_c": float(c.real), "im_c": float(c.imag), "residual": float(r)})
    return recs


def rayleigh_criterion(profile: ShearProfile, y_max: float = 30.0, n: int = 20001) -> str:
    """``"stable_certificate"`` if U'' keeps one sign on [0, Y_max], else ``"inconclusive"``."""
    y = np.linspace(0.0, y_max, n)
    d2 = np.real(profile.deriv2(y))
    scale = np.max(np.abs(d2))
    if scale == 0:
        return "stable_certificate"
    significant = d2[np.abs(d2) > 1e-10 * scale]
    if np.all(significant > 0) or np.all(significant < 0):
        return "stable_certificate"
    return "inconclusive"
