"""Time evolution of a single Fourier mode of the linearised Euler / Navier-Stokes equations.

Vorticity form (omega = -(d^2 - alpha^2) psi, psi(0) = 0):

    d_t omega = -i alpha U omega - i alpha U'' psi + nu (d^2 - alpha^2) omega

Two independent routes are provided: direct time stepping, and the resolvent
representation

    psi(t)   = -(i/2 pi) oint e^{-i alpha c t} Ray^{-1}[omega_0] dc,
    omega(t) =  (i/2 pi) oint e^{-i alpha c t} zeta(y, c) / (U(y) - c) dc,
    zeta     = omega_0 + i alpha U'' Ray^{-1}[omega_0],

with counter-clockwise contours enclosing the spectrum.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .grid import GridFunction
from .rayleigh import ContourResolutionError, NearEigenvalueError, solve_rayleigh_bvp_batch

__all__ = [
    "ModeState",
    "ContourSpec",
    "DampingReport",
    "InsufficientDataError",
    "TruncationWarning",
    "poisson_kernel",
    "poisson_invert",
    "evolve_linear_euler",
    "evolve_linear_ns",
    "euler_trajectory",
    "ns_trajectory",
    "resolvent_contour_evolve",
    "vorticity_contour",
    "damping_diagnostics",
    "trajectory_csv",
]


class InsufficientDataError(ValueError):
    pass


class TruncationWarning(UserWarning):
    pass


# ------------------------------------------------------------------ Poisson


def poisson_kernel(alpha: float, x, y):
    """H(x, y) = (e^{-alpha|x-y|} - e^{-alpha(x+y)}) / (2 alpha)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    return (np.exp(-alpha * np.abs(x - y)) - np.exp(-alpha * (x + y))) / (2 * alpha)


def _cell_weights(alpha, h):
    # exact integrals of e^{-alpha (h - s)} against the two hat functions on a cell
    z = alpha * h
    em = np.exp(-z)
    i0 = -np.expm1(-z) / alpha
    w1 = np.where(z > 1e-4, 1 / alpha - i0 / z, h / 2 - alpha * h**2 / 6)
    return em, i0 - w1, w1


def _sweeps(alpha, y, w):
    """A(x) = int_0^x e^{-alpha(x-s)} w ds and B(x) = int_x^Y e^{-alpha(s-x)} w ds (w piecewise linear)."""
    h = np.diff(y)
    em, w_far, w_near = _cell_weights(alpha, h)
    n = y.size
    a = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    src_a = w_far * w[:-1] + w_near * w[1:]
    src_b = w_near * w[:-1] + w_far * w[1:]
    # linear recurrences a_{j+1} = em_j a_j + src_j, solved by scaled cumulative sums
    logs = np.concatenate([[0.0], np.cumsum(-alpha * h)])  # = -alpha (y - y0)
    if -logs[-1] < 600:
        a[1:] = np.exp(logs[1:]) * np.cumsum(src_a * np.exp(-logs[1:]))
        b[:-1] = np.exp(-logs[:-1]) * np.cumsum((src_b * np.exp(logs[:-1]))[::-1])[::-1]
    else:
        for j in range(n - 1):
            a[j + 1] = em[j] * a[j] + src_a[j]
        for j in range(n - 2, -1, -1):
            b[j] = em[j] * b[j + 1] + src_b[j]
    return a, b


def poisson_invert(alpha: float, omega: GridFunction, derivative: bool = False):
    """psi = int H_alpha(x, y) omega(y) dy, exact for piecewise-linear omega.

    With ``derivative=True`` returns (psi, psi') where psi' comes from the same
    kernel differentiated in x.
    """
    y = omega.y
    w = np.asarray(omega.values, dtype=complex)
    if np.abs(w[-1]) > 1e-6 * max(np.max(np.abs(w)), 1e-300):
        warnings.warn("vorticity does not decay at the end of the grid", TruncationWarning, stacklevel=2)
    a, b = _sweeps(alpha, y, w)
    decay = np.exp(-alpha * (y - y[0]))
    c0 = b[0]
    psi = (a + b - decay * c0) / (2 * alpha)
    psi[0] = 0.0
    out = omega.with_values(psi)
    if derivative:
        return out, omega.with_values((b - a + decay * c0) / 2)
    return out


def _wall_moment(alpha, y, w):
    """psi'(0) = int_0^Y e^{-alpha y} omega dy for piecewise-linear omega."""
    _, b = _sweeps(alpha, y, w)
    return b[0]


# --------------------------------------------------------------- mode state


@dataclass(frozen=True)
class ModeState:
    alpha: float
    omega: GridFunction
    psi: GridFunction
    time: float = 0.0

    @classmethod
    def from_vorticity(cls, alpha: float, y, omega, time: float = 0.0) -> "ModeState":
        w = GridFunction(np.asarray(y, float), np.asarray(omega, dtype=complex), alpha)
        return cls(alpha, w, poisson_invert(alpha, w), time)

    def velocity(self):
        """(u, v) = (psi', -i alpha psi)."""
        _, dpsi = poisson_invert(self.alpha, self.omega, derivative=True)
        return dpsi, self.psi.with_values(-1j * self.alpha * self.psi.values)

    def norms(self) -> dict:
        _, dpsi = poisson_invert(self.alpha, self.omega, derivative=True)
        return {
            "t": self.time,
            "norm_psi_inf": float(np.max(np.abs(self.psi.values))),
            "norm_dpsi_inf": float(np.max(np.abs(dpsi.values))),
            "norm_omega_inf": float(np.max(np.abs(self.omega.values))),
        }


def trajectory_csv(trajectory, path=None) -> str:
    lines = ["t,norm_psi_inf,norm_dpsi_inf,norm_omega_inf"]
    for s in trajectory:
        n = s.norms()
        lines.append(f"{n['t']:.10g},{n['norm_psi_inf']:.10g},{n['norm_dpsi_inf']:.10g},{n['norm_omega_inf']:.10g}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def _check_cfl(profile, state, dt):
    umax = float(np.max(np.abs(profile.eval(state.omega.y))))
    if dt <= 0:
        raise ValueError("dt must be positive")
    if state.alpha * umax * dt > 0.5:
        raise ValueError(f"alpha * max|U| * dt = {state.alpha * umax * dt:.3g} exceeds 0.5")


def _stop_times(t0, times, dt):
    """Split each interval between requested output times into equal steps no longer than dt."""
    out = []
    prev = t0
    for t in times:
        if t < prev - 1e-12:
            raise ValueError("output times must be non-decreasing and not before the state time")
        n = max(1, int(np.ceil((t - prev) / dt - 1e-9))) if t > prev else 0
        out.append((t, n, (t - prev) / n if n else 0.0))
        prev = t
    return out


# --------------------------------------------------------------- Euler


def euler_trajectory(profile, state: ModeState, times, dt: float) -> list[ModeState]:
    """Linearised Euler by RK4 on the interaction-picture vorticity omega e^{i alpha U t}."""
    _check_cfl(profile, state, dt)
    a = state.alpha
    y = state.omega.y
    u = np.real(profile.eval(y))
    u2 = np.real(profile.deriv2(y))
    t0 = state.time

    def rhs(t, wt):
        phase = np.exp(-1j * a * u * (t - t0))
        w = wt * phase
        psi = poisson_invert(a, state.omega.with_values(w)).values
        return -1j * a * u2 * psi / phase

    wt = np.array(state.omega.values, dtype=complex)
    t = t0
    out = []
    for target, n, h in _stop_times(t0, times, dt):
        for _ in range(n):
            k1 = rhs(t, wt)
            k2 = rhs(t + h / 2, wt + h / 2 * k1)
            k3 = rhs(t + h / 2, wt + h / 2 * k2)
            k4 = rhs(t + h, wt + h * k3)
            wt = wt + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        t = target
        w = state.omega.with_values(wt * np.exp(-1j * a * u * (t - t0)))
        out.append(ModeState(a, w, poisson_invert(a, w), t))
    return out


def evolve_linear_euler(profile, state: ModeState, t_final: float, dt: float) -> ModeState:
    return euler_trajectory(profile, state, [t_final], dt)[-1]


# ---------------------------------------------------------- Navier-Stokes


def _laplacian_bands(y, alpha):
    """Tridiagonal second difference minus alpha^2 on a (possibly non-uniform) grid, interior rows."""
    hm = y[1:-1] - y[:-2]
    hp = y[2:] - y[1:-1]
    lo = 2 / (hm * (hm + hp))
    up = 2 / (hp * (hm + hp))
    di = -lo - up - alpha**2
    return lo, di, up


def ns_trajectory(profile, state: ModeState, nu: float, times, dt: float) -> list[ModeState]:
    """Linearised Navier-Stokes on the vorticity.

    Transport and diffusion are Crank-Nicolson (tridiagonal); the coupling
    -i alpha U'' psi is second-order Adams-Bashforth.  No-slip enters through
    the wall vorticity: each step combines a particular solution (omega(0) = 0)
    with the response to unit wall vorticity so that
    psi'(0) = int e^{-alpha y} omega dy = 0.
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    _check_cfl(profile, state, dt)
    a = state.alpha
    y = state.omega.y
    u = np.real(profile.eval(y))
    u2 = np.real(profile.deriv2(y))
    lo, di, up = _laplacian_bands(y, a)
    m = y.size - 2
    tr = -1j * a * u[1:-1]

    def coupling(w):
        return -1j * a * u2 * poisson_invert(a, state.omega.with_values(w)).values

    def op(w):
        # (-i alpha U + nu (d^2 - alpha^2)) w at interior points
        return tr * w[1:-1] + nu * (lo * w[:-2] + di * w[1:-1] + up * w[2:])

    cache = {}

    def factor(h):
        if h not in cache:
            ab = np.zeros((3, m), dtype=complex)
            ab[0, 1:] = -0.5 * h * nu * up[:-1]
            ab[1] = 1 - 0.5 * h * (nu * di + tr)
            ab[2, :-1] = -0.5 * h * nu * lo[1:]
            rhs = np.zeros(m, dtype=complex)
            rhs[0] = 0.5 * h * nu * lo[0]
            hom = np.concatenate([[1.0], solve_banded((1, 1), ab, rhs), [0.0]])
            cache[h] = (ab, hom, _wall_moment(a, y, hom))
        return cache[h]

    w = np.array(state.omega.values, dtype=complex)
    t = state.time
    prev = None
    out = []
    for target, n, h in _stop_times(t, times, dt):
        if n == 0:
            wf = state.omega.with_values(w.copy())
            out.append(ModeState(a, wf, poisson_invert(a, wf), t))
            continue
        ab, hom, mom = factor(h)
        for _ in range(n):
            f = coupling(w)
            if prev is None:
                adv = f
            else:
                f_old, h_old = prev
                adv = f + 0.5 * h / h_old * (f - f_old)
            prev = (f, h)
            rhs = w[1:-1] + 0.5 * h * op(w) + h * adv[1:-1]
            part = np.concatenate([[0.0], solve_banded((1, 1), ab, rhs), [0.0]])
            w = part - _wall_moment(a, y, part) / mom * hom
            t += h
        t = target
        wf = state.omega.with_values(w.copy())
        out.append(ModeState(a, wf, poisson_invert(a, wf), t))
    return out


def evolve_linear_ns(profile, state: ModeState, nu: float, t_final: float, dt: float) -> ModeState:
    return ns_trajectory(profile, state, nu, [t_final], dt)[-1]


# --------------------------------------------------------------- contours


@dataclass(frozen=True)
class ContourSpec:
    """Closed polygon in the c-plane, traversed in vertex order (counter-clockwise by default)."""

    vertices: tuple
    ccw: bool = True
    panel_length: float = 0.05
    nodes_per_panel: int = 8

    @classmethod
    def rectangle(cls, lo: float, hi: float, margin: float = 0.2, height: float = 0.1, **kw) -> "ContourSpec":
        """Rectangle [lo - margin, hi + margin] x [-height, height] around the segment [lo, hi]."""
        x0, x1 = lo - margin, hi + margin
        v = (complex(x0, -height), complex(x1, -height), complex(x1, height), complex(x0, height))
        return cls(v, True, kw.pop("panel_length", height), **kw)

    def refined(self) -> "ContourSpec":
        return ContourSpec(self.vertices, self.ccw, self.panel_length / 2, self.nodes_per_panel)

    def validate(self, segment=None):
        v = np.asarray(self.vertices, dtype=complex)
        if v.size < 3 or not np.all(np.isfinite(v)):
            raise ValueError("a contour needs at least three finite vertices")
        if segment is not None:
            lo, hi = segment
            on = (np.abs(v.imag) < 1e-12) & (v.real >= lo) & (v.real <= hi)
            if on.any():
                raise ValueError(f"vertex {v[on][0]} lies on the continuous spectrum")

    def nodes(self):
        """Composite Gauss-Legendre nodes and weights dc along the closed polygon."""
        v = list(np.asarray(self.vertices, dtype=complex))
        if not self.ccw:
            v = v[::-1]
        x, wq = np.polynomial.legendre.leggauss(self.nodes_per_panel)
        cs, ws = [], []
        for a, b in zip(v, v[1:] + v[:1]):
            n = max(2, 2 * int(np.ceil(abs(b - a) / self.panel_length / 2)))  # even: no node at a side midpoint
            edges = a + (b - a) * np.arange(n + 1) / n
            for p, q in zip(edges[:-1], edges[1:]):
                cs.append(0.5 * (p + q) + 0.5 * (q - p) * x)
                ws.append(0.5 * (q - p) * wq)
        return np.concatenate(cs), np.concatenate(ws)


def _omega0_of(alpha, initial):
    if isinstance(initial, ModeState):
        return initial.omega
    psi = initial
    y, p = psi.y, np.asarray(psi.values, dtype=complex)
    d2 = np.gradient(np.gradient(p, y, edge_order=2), y, edge_order=2)
    return psi.with_values(-(d2 - alpha**2 * p))


def _resolvent_nodes(profile, alpha, omega0: GridFunction, cs, chunk: int = 64):
    """Ray^{-1}[omega_0] at every node c."""
    out = np.empty((cs.size, omega0.y.size), dtype=complex)
    for i in range(0, cs.size, chunk):
        try:
            out[i : i + chunk] = solve_rayleigh_bvp_batch(profile, alpha, cs[i : i + chunk], omega0)
        except NearEigenvalueError as exc:
            raise ContourResolutionError(f"contour node too close to the spectrum: {exc}") from exc
    return out


def _contour_psi(profile, alpha, omega0, contour, times):
    cs, ws = contour.nodes()
    rv = _resolvent_nodes(profile, alpha, omega0, cs)
    out = []
    for t in np.atleast_1d(times):
        kern = np.exp(-1j * alpha * cs * t) * ws
        out.append(-(1j / (2 * np.pi)) * (kern @ rv))
    return cs, ws, rv, out


def resolvent_contour_evolve(profile, alpha: float, initial, t, contour: ContourSpec, check: bool = True):
    """psi(t) from the contour integral of the Rayleigh resolvent; ``t`` may be a list.

    ``initial`` is a ModeState (its vorticity is used) or a stream-function
    GridFunction.  With ``check`` the integral is recomputed with panels halved
    and a resolution error is raised if the two differ by more than 1e-4 relative.
    """
    contour.validate((0.0, profile.u_plus))
    omega0 = _omega0_of(alpha, initial)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    _, _, _, vals = _contour_psi(profile, alpha, omega0, contour, times)
    if check:
        _, _, _, fine = _contour_psi(profile, alpha, omega0, contour.refined(), times)
        for ti, a_, b_ in zip(times, vals, fine):
            err = np.max(np.abs(a_ - b_)) / max(np.max(np.abs(b_)), 1e-300)
            if err > 1e-4:
                raise ContourResolutionError(f"contour quadrature not converged at t = {ti:g}: {err:.2e}")
        vals = fine
    res = [omega0.with_values(v) for v in vals]
    return res[0] if np.ndim(t) == 0 else res


def vorticity_contour(profile, alpha: float, omega0: GridFunction, t, y, contour: ContourSpec):
    """Pointwise omega(t, y) = (i/2pi) oint e^{-i alpha c t} zeta(y, c) / (U(y) - c) dc."""
    contour.validate((0.0, profile.u_plus))
    cs, ws = contour.nodes()
    yq = np.atleast_1d(np.asarray(y, dtype=float))
    uy = np.real(profile.eval(yq))
    spacing = np.max(np.abs(np.diff(cs)))
    dist = np.min(np.abs(uy[:, None] - cs[None, :]))
    if dist < spacing:
        raise ContourResolutionError(f"|U(y) - c| = {dist:.2e} below the node spacing {spacing:.2e}")
    if not np.any(omega0.values):
        out = np.zeros(yq.size, dtype=complex)
        return complex(out[0]) if np.ndim(y) == 0 else out
    rv = _resolvent_nodes(profile, alpha, omega0, cs)
    psi_hat = np.array([np.interp(yq, omega0.y, r.real) + 1j * np.interp(yq, omega0.y, r.imag) for r in rv])
    w0 = np.interp(yq, omega0.y, omega0.values.real) + 1j * np.interp(yq, omega0.y, omega0.values.imag)
    u2 = np.real(profile.deriv2(yq))
    # psi_{alpha,c} = (i/alpha) Ray^{-1} omega_0, so i alpha U'' psi_{alpha,c} = -U'' Ray^{-1} omega_0
    zeta = w0[None, :] - u2[None, :] * psi_hat
    out = []
    for tt in np.atleast_1d(t):
        kern = np.exp(-1j * alpha * cs * tt) * ws
        out.append((1j / (2 * np.pi)) * (kern @ (zeta / (uy[None, :] - cs[:, None]))))
    out = np.array(out)
    if np.ndim(t) == 0:
        out = out[0]
    return complex(out[0]) if np.ndim(y) == 0 and np.ndim(t) == 0 else out


# --------------------------------------------------------------- damping


@dataclass
class DampingReport:
    decay_exponent: float
    omega_infinity: GridFunction
    times: np.ndarray
    velocity_norms: np.ndarray
    cauchy: list = field(default_factory=list)  # (t1, t2, sup |demod(t2) - demod(t1)|)
    cauchy_constant: float = np.nan

    def __iter__(self):
        return iter((self.decay_exponent, self.omega_infinity))


def damping_diagnostics(trajectory, profile, t_min: float = 10.0) -> DampingReport:
    """Slope of log(alpha |psi|_inf + |psi'|_inf) against log<t>, and the demodulated vorticity limit."""
    ts = np.array([s.time for s in trajectory])
    late = ts >= t_min
    if late.sum() < 3 or ts[late].max() < 10 * t_min * (1 - 1e-9):
        raise InsufficientDataError("trajectory must span a decade beyond t_min")
    states = [s for s, k in zip(trajectory, late) if k]
    a = states[0].alpha
    y = states[0].omega.y
    u = np.real(profile.eval(y))
    norms = []
    for s in states:
        n = s.norms()
        norms.append(a * n["norm_psi_inf"] + n["norm_dpsi_inf"])
    norms = np.array(norms)
    bracket = np.sqrt(1 + ts[late] ** 2)
    slope = float(np.polyfit(np.log(bracket), np.log(norms), 1)[0])
    demod = [s.omega.values * np.exp(1j * a * u * s.time) for s in states]
    t_end = ts[late].max()
    window = [d for d, s in zip(demod, states) if s.time >= t_end / 10]
    omega_inf = states[-1].omega.with_values(np.mean(window, axis=0))
    cauchy = []
    for i in range(len(states) - 1):
        if states[i].time >= 20:
            cauchy.append((states[i].time, states[-1].time, float(np.max(np.abs(demod[-1] - demod[i])))))
    const = max((t1 * d for t1, _, d in cauchy), default=np.nan)
    return DampingReport(slope, omega_inf, ts[late], norms, cauchy, const)
