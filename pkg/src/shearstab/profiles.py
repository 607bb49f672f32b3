"""Background shear profiles U_s(y), the half-line heat flow and critical points."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq

__all__ = [
    "ShearProfile",
    "HeatState",
    "ConfigurationError",
    "RootNotFoundError",
    "DomainError",
    "builtin_profile",
    "tabulated_profile",
    "heat_evolve",
    "critical_point",
    "BUILTIN_PROFILES",
]


class ConfigurationError(ValueError):
    """Unknown profile name or invalid profile parameters."""


class RootNotFoundError(RuntimeError):
    pass


class DomainError(ValueError):
    """A complex point lies outside the region where the profile is trusted."""


Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ShearProfile:
    """Analytic shear profile on the half line with its first two derivatives.

    ``eval``, ``deriv1`` and ``deriv2`` accept real or complex arrays.
    ``singular_distance(y)`` bounds the distance from ``y`` to the nearest
    singularity of the analytic extension (``inf`` for entire profiles).
    """

    name: str
    eval: Fn
    deriv1: Fn
    deriv2: Fn
    u_plus: float
    monotone: bool
    concave: bool
    analyticity_width: float
    singular_distance: Fn | None = None
    analytic: bool = True
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.u_plus == 0:
            raise ConfigurationError("u_plus must be nonzero")
        if self.analyticity_width <= 0:
            raise ConfigurationError("analyticity_width must be positive")

    def __call__(self, y):
        return self.eval(y)

    def distance_to_singularity(self, y: complex) -> float:
        if self.singular_distance is None:
            return float(self.analyticity_width - abs(np.imag(y)))
        return float(self.singular_distance(y))

    def require_analytic(self, what: str = "complex evaluation") -> None:
        if not self.analytic:
            raise DomainError(f"profile {self.name!r} is tabulated; {what} needs an analytic profile")

    def taylor(self, center: complex, n_terms: int, radius: float) -> np.ndarray:
        """Taylor coefficients of U_s about ``center`` by FFT on a circle."""
        self.require_analytic("Taylor expansion")
        m = max(2 * n_terms, 64)
        theta = 2 * np.pi * np.arange(m) / m
        samples = self.eval(center + radius * np.exp(1j * theta))
        coef = np.fft.fft(samples) / m
        return coef[:n_terms] / radius ** np.arange(n_terms)


def _tanh_poles_distance(shift: float) -> Fn:
    def dist(y):
        y = complex(y) - shift
        k = np.round(y.imag / np.pi - 0.5)
        d = [abs(y - 1j * (np.pi / 2 + j * np.pi)) for j in (k - 1, k, k + 1)]
        return float(min(d))

    return dist


def _tanh(u_plus: float) -> ShearProfile:
    sech2 = lambda y: 1.0 / np.cosh(y) ** 2
    return ShearProfile(
        name="tanh",
        eval=lambda y: u_plus * np.tanh(y),
        deriv1=lambda y: u_plus * sech2(y),
        deriv2=lambda y: -2.0 * u_plus * np.tanh(y) * sech2(y),
        u_plus=u_plus,
        monotone=u_plus > 0,
        concave=u_plus > 0,
        analyticity_width=np.pi / 2,
        singular_distance=_tanh_poles_distance(0.0),
        params={"u_plus": u_plus},
    )


def _exp_layer(u_plus: float) -> ShearProfile:
    return ShearProfile(
        name="exp_layer",
        eval=lambda y: u_plus * (1.0 - np.exp(-y)),
        deriv1=lambda y: u_plus * np.exp(-y),
        deriv2=lambda y: -u_plus * np.exp(-y),
        u_plus=u_plus,
        monotone=u_plus > 0,
        concave=u_plus > 0,
        analyticity_width=np.inf,
        singular_distance=lambda y: np.inf,
        params={"u_plus": u_plus},
    )


def _inflected(u_plus: float) -> ShearProfile:
    """u_plus * (tanh(y - 1) + tanh 1) / (1 + tanh 1): inflection point at y = 1."""
    t1 = np.tanh(1.0)
    s = u_plus / (1.0 + t1)
    sech2 = lambda y: 1.0 / np.cosh(y - 1.0) ** 2
    return ShearProfile(
        name="inflected",
        eval=lambda y: s * (np.tanh(y - 1.0) + t1),
        deriv1=lambda y: s * sech2(y),
        deriv2=lambda y: -2.0 * s * np.tanh(y - 1.0) * sech2(y),
        u_plus=u_plus,
        monotone=u_plus > 0,
        concave=False,
        analyticity_width=np.pi / 2,
        singular_distance=_tanh_poles_distance(1.0),
        params={"u_plus": u_plus},
    )


BUILTIN_PROFILES = {"tanh": _tanh, "exp_layer": _exp_layer, "inflected": _inflected}


def builtin_profile(name: str, u_plus: float = 1.0) -> ShearProfile:
    """Closed-form profile by name: ``tanh``, ``exp_layer`` or the test profile ``inflected``."""
    if name not in BUILTIN_PROFILES:
        raise ConfigurationError(f"unknown profile {name!r}; choose from {sorted(BUILTIN_PROFILES)}")
    if not np.isfinite(u_plus) or u_plus == 0:
        raise ConfigurationError("u_plus must be finite and nonzero")
    return BUILTIN_PROFILES[name](float(u_plus))


def tabulated_profile(y, u, name: str = "tabulated") -> ShearProfile:
    """Real-line interpolant of sampled data; complex evaluation is refused."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    d1 = np.gradient(u, y, edge_order=2)
    d2 = np.gradient(d1, y, edge_order=2)

    def real_only(values):
        def f(x):
            x = np.asarray(x)
            if np.iscomplexobj(x) and np.any(np.imag(x) != 0):
                raise DomainError(f"profile {name!r} is tabulated and has no complex extension")
            return np.interp(np.real(x), y, values)

        return f

    return ShearProfile(
        name=name,
        eval=real_only(u),
        deriv1=real_only(d1),
        deriv2=real_only(d2),
        u_plus=float(u[-1]),
        monotone=bool(np.all(d1[:-1] > 0)),
        concave=bool(np.all(d2 <= 0)),
        analyticity_width=1e-300,
        analytic=False,
    )


# ------------------------------------------------------------------ heat flow


@dataclass(frozen=True)
class HeatState:
    """Samples of U(t, y) on a uniform grid; ``values[0] = 0`` and ``values[-1] = u_plus``."""

    grid: np.ndarray
    values: np.ndarray
    time: float = 0.0

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write(f"# t = {self.time!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["y", "U"])
        for a, b in zip(self.grid, self.values):
            w.writerow([repr(float(a)), repr(float(b))])
        if path is not None:
            Path(path).write_text(buf.getvalue())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, path) -> "HeatState":
        lines = Path(path).read_text().splitlines()
        t = 0.0
        if lines and lines[0].startswith("# t ="):
            t = float(lines[0].split("=", 1)[1])
        rows = [l.split(",") for l in lines if l and not l.startswith("#")][1:]
        data = np.array(rows, dtype=float)
        return cls(data[:, 0], data[:, 1], t)

    @classmethod
    def from_profile(cls, profile: ShearProfile, y_max: float = 30.0, n_points: int = 2048) -> "HeatState":
        y = np.linspace(0.0, y_max, n_points)
        u = np.real(profile.eval(y)).astype(float)
        u[0] = 0.0
        return cls(y, u, 0.0)


def heat_evolve(state: HeatState, dt: float, steps: int, scheme: str = "implicit") -> HeatState:
    """Advance U_t = U_yy with U(t, 0) = 0 and U(t, Y_max) clamped to its initial far value.

    ``implicit`` is Crank-Nicolson; ``explicit`` is forward Euler and enforces
    dt <= h^2 / 2.
    """
    y = np.asarray(state.grid, dtype=float)
    u = np.array(state.values, dtype=float)
    h = np.diff(y)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0):
        raise ValueError("heat_evolve needs a uniform grid")
    if dt <= 0 or steps < 0:
        raise ValueError("dt must be positive and steps non-negative")
    h = h[0]
    r = dt / h**2
    u_far = u[-1]
    u[0] = 0.0
    n = u.size - 2
    if scheme == "explicit":
        if r > 0.5:
            raise ValueError(f"explicit scheme unstable: dt/h^2 = {r:.3g} > 1/2")
        for _ in range(steps):
            u[1:-1] = u[1:-1] + r * (u[2:] - 2 * u[1:-1] + u[:-2])
    elif scheme == "implicit":
        ab = np.zeros((3, n))
        ab[0, 1:] = -0.5 * r
        ab[1, :] = 1.0 + r
        ab[2, :-1] = -0.5 * r
        for _ in range(steps):
            rhs = u[1:-1] + 0.5 * r * (u[2:] - 2 * u[1:-1] + u[:-2])
            rhs[-1] += 0.5 * r * u_far
            u[1:-1] = solve_banded((1, 1), ab, rhs)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    u[0] = 0.0
    u[-1] = u_far
    return replace(state, values=u, time=state.time + dt * steps)


# ------------------------------------------------------------- critical point


def _newton_preimage(profile: ShearProfile, c: complex, y: complex, tol: float) -> complex | None:
    for _ in range(50):
        f = complex(profile.eval(y)) - c
        if not np.isfinite(f):
            return None
        if abs(f) <= tol * max(1.0, abs(c)):
            return y
        y = y - f / complex(profile.deriv1(y))
    return None


def critical_point(profile: ShearProfile, c: complex, y_max: float = 30.0, tol: float = 1e-12) -> complex:
    """Solve U_s(y_c) = c by Newton's method from the real preimage of Re c."""
    c = complex(c)
    if c == 0:
        return 0j
    profile.require_analytic("critical_point")
    cr = c.real
    u_end = float(np.real(profile.eval(y_max)))
    if 0.0 < cr / profile.u_plus < 1.0 and profile.monotone and (cr - u_end) * profile.u_plus < 0:
        seed = brentq(lambda y: float(np.real(profile.eval(y))) - cr, 0.0, y_max, xtol=1e-14)
    else:
        seed = cr / float(np.real(profile.deriv1(0.0)))
    y = None
    # plain Newton first; if it wanders, walk Im c up from the real preimage
    for n_steps in (1, 16):
        y = complex(seed)
        for target in cr + 1j * c.imag * np.linspace(0.0, 1.0, n_steps + 1)[1:]:
            y = _newton_preimage(profile, target, y, tol)
            if y is None:
                break
        if y is not None:
            break
    if y is None:
        raise RootNotFoundError(f"critical point for c = {c} did not converge")
    if profile.distance_to_singularity(y) <= 0 or abs(y.imag) >= profile.analyticity_width:
        raise DomainError(f"critical point {y} lies outside the analyticity strip")
    return y
