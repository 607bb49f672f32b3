"""Exact scale algebra for the multilayer instability ladder.

Every scale is a ``ScaleExpr``: a symbolic prefactor times nu^p (log 1/nu)^k with
p an exact ``Fraction``.  Prefactors are tags only; no constant is ever given a
value.  The entries of a ``LayerReport`` are derived by composing rescalings,
never typed in.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .grid import GridFunction
from .profiles import ShearProfile

__all__ = [
    "ScaleExpr",
    "ScaleEntry",
    "LayerReport",
    "BranchError",
    "CascadeTerminated",
    "NU",
    "ONE",
    "scale_mul",
    "scale_div",
    "scale_pow",
    "rescale_viscosity",
    "reynolds_number",
    "sublayer_corrector",
    "second_layer_profile",
    "group_velocity",
    "dimensional_group_velocity",
    "saturation_amplitude",
    "layer_ladder",
    "cascade_report",
]


class BranchError(ValueError):
    """No decaying boundary-layer corrector exists for this phase speed."""


class CascadeTerminated(RuntimeError):
    pass


def _frac(r) -> Fraction:
    if isinstance(r, float):
        raise TypeError("exponents must be exact rationals, not floats")
    return Fraction(r)


@dataclass(frozen=True)
class ScaleExpr:
    """prefactor * nu^exponent * (log 1/nu)^log_power, with an exact rational exponent."""

    exponent: Fraction = Fraction(0)
    log_power: int = 0
    prefactor: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "exponent", _frac(self.exponent))

    def __mul__(self, other: "ScaleExpr") -> "ScaleExpr":
        return scale_mul(self, other)

    def __truediv__(self, other: "ScaleExpr") -> "ScaleExpr":
        return scale_div(self, other)

    def __pow__(self, r) -> "ScaleExpr":
        return scale_pow(self, r)

    def tagged(self, prefactor: str) -> "ScaleExpr":
        return ScaleExpr(self.exponent, self.log_power, prefactor)

    def evaluate(self, nu: float) -> float:
        """Exponent-only value nu^p (log 1/nu)^k; prefactors are not numbers."""
        return float(nu) ** float(self.exponent) * np.log(1.0 / nu) ** self.log_power

    def __str__(self) -> str:
        parts = [] if self.prefactor == "1" else [self.prefactor]
        if self.exponent != 0 or not parts:
            parts.append(f"nu^({self.exponent})")
        if self.log_power:
            parts.append(f"log(1/nu)^{self.log_power}" if self.log_power != 1 else "log(1/nu)")
        return " ".join(parts)


NU = ScaleExpr(Fraction(1))
ONE = ScaleExpr(Fraction(0))


def _combine_tags(a: str, b: str, sep: str) -> str:
    if b == "1":
        return a
    if a == "1":
        return b if sep == "*" else f"1/{b}"
    return f"{a}{sep}{b}"


def scale_mul(a: ScaleExpr, b: ScaleExpr) -> ScaleExpr:
    return ScaleExpr(a.exponent + b.exponent, a.log_power + b.log_power, _combine_tags(a.prefactor, b.prefactor, "*"))


def scale_div(a: ScaleExpr, b: ScaleExpr) -> ScaleExpr:
    return ScaleExpr(a.exponent - b.exponent, a.log_power - b.log_power, _combine_tags(a.prefactor, b.prefactor, "/"))


def scale_pow(a: ScaleExpr, r) -> ScaleExpr:
    r = _frac(r)
    if a.log_power and r.denominator != 1:
        raise ValueError("fractional power of a log factor is not representable")
    tag = a.prefactor if a.prefactor == "1" or r == 1 else f"({a.prefactor})^({r})"
    return ScaleExpr(a.exponent * r, int(a.log_power * r), tag)


def rescale_viscosity(a) -> ScaleExpr:
    """Viscosity after (T, X, Y) = nu^{-a} (t, x, y): the equations keep their form with nu^{1-a}."""
    a = _frac(a)
    if not 0 <= a < 1:
        raise ValueError("rescaling exponent must lie in [0, 1)")
    return NU / scale_pow(NU, a)


def reynolds_number(length: ScaleExpr, velocity: ScaleExpr, viscosity: ScaleExpr) -> ScaleExpr:
    return length * velocity / viscosity


# ------------------------------------------------------------- correctors


def _mu(c1: complex) -> complex:
    mu = np.sqrt(-complex(c1))  # principal branch
    if mu.real <= 0:
        raise BranchError(f"Re mu = {mu.real:.3g} <= 0 for c1 = {c1}: no decaying corrector")
    return mu


def sublayer_corrector(dphi0: complex, c1: complex, nu1: float, grid, alpha1: float = 1.0) -> GridFunction:
    """phi_bl(Y) = -dphi0 nu1^{1/2} mu^{-1} (1 - e^{-nu1^{-1/2} mu Y}), mu = (-c1)^{1/2}.

    meta carries u_bl = d_Y phi_bl (which cancels dphi0 at the wall), v_bl = -i alpha1 phi_bl
    and the 1/e depth nu1^{1/2} / Re mu.
    """
    if complex(c1).imag <= 0:
        raise ValueError("the construction needs an unstable mode, Im c1 > 0")
    mu = _mu(c1)
    y = np.asarray(grid, dtype=float)
    s = np.sqrt(nu1)
    decay = np.exp(-mu * y / s)
    phi = -dphi0 * s / mu * (1 - decay)
    u = -dphi0 * decay
    return GridFunction(y, phi, alpha1, meta={"u_bl": u, "v_bl": -1j * alpha1 * phi, "mu": mu, "depth": s / mu.real})


def second_layer_profile(dphi0: complex, c1: complex, name: str = "second_layer") -> ShearProfile:
    """Frozen sublayer velocity U(Y) = -(1 - e^{-mu Y}) dphi0 + c.c. as a ShearProfile."""
    if complex(c1).imag <= 0:
        raise ValueError("the construction needs an unstable mode, Im c1 > 0")
    mu = _mu(c1)
    d = complex(dphi0)

    def ev(y):
        e = np.exp(-mu * y)
        return -(1 - e) * d - (1 - np.exp(-np.conj(mu) * y)) * np.conj(d)

    def d1(y):
        return -mu * np.exp(-mu * y) * d - np.conj(mu) * np.exp(-np.conj(mu) * y) * np.conj(d)

    def d2(y):
        return mu**2 * np.exp(-mu * y) * d + np.conj(mu) ** 2 * np.exp(-np.conj(mu) * y) * np.conj(d)

    u_plus = float(-2 * d.real)
    ys = np.linspace(0, 40 / mu.real, 4001)
    g1, g2 = np.real(d1(ys)), np.real(d2(ys))
    tol = 1e-10 * np.max(np.abs(g2))
    return ShearProfile(
        name=name,
        eval=ev,
        deriv1=d1,
        deriv2=d2,
        u_plus=u_plus,
        monotone=bool(np.all(g1 * np.sign(u_plus) > 0)),
        concave=bool(np.all(g2 * np.sign(u_plus) <= tol)),
        analyticity_width=np.inf,
        singular_distance=lambda y: np.inf,
        params={"dphi0": d, "c1": complex(c1), "mu": mu},
    )


def group_velocity(scan, alpha0: float) -> complex:
    """d(alpha0 c0)/d alpha0 from the scan table (rescaled variables)."""
    a = np.asarray(scan.alpha0, dtype=float)
    c = np.asarray(scan.c0, dtype=complex)
    j = int(np.argmin(np.abs(a - alpha0)))
    if j < 2 or j > a.size - 3 or not a[0] <= alpha0 <= a[-1]:
        raise ValueError("alpha0 needs two scan points on each side for the difference stencil")
    g = np.gradient(a * c, a, edge_order=2)
    return complex(np.interp(alpha0, a, g.real) + 1j * np.interp(alpha0, a, g.imag))


def dimensional_group_velocity(scan, alpha0: float, nu: float) -> complex:
    """sigma = nu^{1/4} d(alpha0 c0)/d alpha0, since alpha c = nu^{1/2} alpha0 c0 and alpha = nu^{1/4} alpha0."""
    return nu**0.25 * group_velocity(scan, alpha0)


def saturation_amplitude(re_a_sign: str) -> ScaleExpr:
    """Saturation size of phi' = alpha1 c1 phi + A|phi|^2 phi + ... by the sign of Re A.

    The linear rate is nu1^{1/4} = nu^{1/8}; a cubic balance gives its square
    root, a quintic one (cubic cancellation) its fourth root.
    """
    rate = scale_pow(rescale_viscosity(Fraction(1, 2)), Fraction(1, 4))
    if re_a_sign == "negative":
        return scale_pow(rate, Fraction(1, 2))
    if re_a_sign == "zero":
        return scale_pow(rate, Fraction(1, 4))
    if re_a_sign == "positive":
        return ONE
    raise ValueError("re_a_sign must be 'negative', 'zero' or 'positive'")


# ----------------------------------------------------------------- ladder


def layer_ladder(max_layers: int = 2) -> list[dict]:
    """Rescaling exponents and viscosities of successive sublayers.

    Layer 1 zooms onto the Prandtl layer (nu^{1/2}), layer 2 onto the viscous
    sublayer of its instability (nu^{3/4}).  The next instability is too weak
    to seed a further layer, so asking for more raises.
    """
    if max_layers > 2:
        raise CascadeTerminated("the layer-2 instability is too small in magnitude to build a third sublayer")
    half = Fraction(1, 2)
    out = []
    nu1 = rescale_viscosity(half)
    out.append({"layer": 1, "zoom": scale_pow(NU, half), "viscosity": nu1})
    if max_layers >= 2:
        # sublayer depth in layer-1 variables is nu1^{1/2}
        depth = scale_pow(NU, half) * scale_pow(nu1, half)
        out.append({"layer": 2, "zoom": depth, "viscosity": rescale_viscosity(depth.exponent)})
    return out[:max_layers]


@dataclass(frozen=True)
class ScaleEntry:
    quantity: str  # vertical | horizontal | time | reynolds | onset | travel | saturation
    label: str
    expr: ScaleExpr
    anchor: str


@dataclass
class LayerReport:
    scenario: str
    nu: float
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def of(self, quantity: str) -> list[ScaleEntry]:
        return [e for e in self.entries if e.quantity == quantity]

    @property
    def vertical_scales(self):
        return self.of("vertical")

    @property
    def horizontal_scales(self):
        return self.of("horizontal")

    @property
    def time_scales(self):
        return self.of("time")

    @property
    def reynolds(self):
        return self.of("reynolds")

    def rows(self):
        for e in self.entries:
            yield {
                "quantity": e.quantity,
                "label": e.label,
                "exponent": str(e.expr.exponent),
                "log_power": e.expr.log_power,
                "value_at_nu": f"{e.expr.evaluate(self.nu):.6e}",
                "anchor": e.anchor,
            }

    def to_csv(self, path=None, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            for line in header.splitlines():
                buf.write(f"# {line}\n")
        w = csv.DictWriter(buf, ["quantity", "label", "exponent", "log_power", "value_at_nu", "anchor"], lineterminator="\n")
        w.writeheader()
        for r in self.rows():
            w.writerow(r)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(buf.getvalue())
        return buf.getvalue()

    def to_text(self) -> str:
        rows = list(self.rows())
        cols = ["quantity", "label", "exponent", "log_power", "value_at_nu", "anchor"]
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
        lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
        lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in cols) for r in rows]
        return "\n".join(lines + [""] + [f"note: {n}" for n in self.notes]) + "\n"


def _unstable(nu: float) -> LayerReport:
    l1, l2 = layer_ladder(2)
    nu1, nu2 = l1["viscosity"], l2["viscosity"]
    prandtl, sub = l1["zoom"], l2["zoom"]
    u_plus = ONE.tagged("U_+")
    q2 = scale_pow(nu2, Fraction(1, 4))  # natural wavenumber and phase speed of layer 2
    rate2 = scale_pow(nu2, Fraction(1, 2))  # alpha2 Im c2
    t_insta2 = sub / rate2
    sigma2 = q2
    travel = sub * sigma2 / rate2
    e = [
        ScaleEntry("vertical", "domain", ONE, "domain size"),
        ScaleEntry("vertical", "Prandtl layer", prandtl, "background shear layer thickness"),
        ScaleEntry("vertical", "viscous sublayer", sub, "Prandtl thickness times nu1^(1/2)"),
        ScaleEntry("vertical", "second critical layer", sub * q2, "sublayer depth times critical point Z_c ~ nu2^(1/4)"),
        ScaleEntry("horizontal", "domain", ONE, "domain size"),
        ScaleEntry("horizontal", "first instability wavelength", prandtl, "alpha1 = O(1) in layer-1 variables"),
        ScaleEntry("horizontal", "second instability wavelength", sub / q2, "alpha2 ~ nu2^(1/4) in layer-2 variables"),
        ScaleEntry("time", "domain", ONE, "advective time"),
        ScaleEntry("time", "first instability", prandtl, "O(1) growth in layer-1 time"),
        ScaleEntry("time", "second instability", t_insta2, "inverse growth nu2^(-1/2) in layer-2 time"),
        ScaleEntry("onset", "instability time T^nu", ScaleExpr(0, 1, "C0"), "logarithmic growth from a nu^N seed"),
        ScaleEntry("reynolds", "Prandtl layer", reynolds_number(prandtl, u_plus, NU), "thickness * U_+ / nu"),
        ScaleEntry("reynolds", "viscous sublayer", reynolds_number(sub, u_plus, NU), "thickness * U_+ / nu"),
        ScaleEntry("viscosity", "layer 1", nu1, "viscosity after zooming by nu^(-1/2)"),
        ScaleEntry("viscosity", "layer 2", nu2, "viscosity after zooming by nu^(-3/4)"),
        ScaleEntry("travel", "second wave packet drift", travel, "group velocity nu2^(1/4) over the growth time"),
        ScaleEntry("velocity", "second group velocity", sigma2, "c2 + alpha2 dc2/dalpha2 ~ nu2^(1/4)"),
    ]
    notes = [
        "prefactors are symbolic; numeric values are exponent-only",
        "the drift of the second wave packet stays below the Prandtl thickness",
        "the cascade stops at layer 2",
    ]
    return LayerReport("euler_unstable", nu, e, notes)


def _stable(nu: float) -> LayerReport:
    (l1,) = layer_ladder(1)
    nu1 = l1["viscosity"]
    prandtl = l1["zoom"]
    alpha1 = scale_pow(nu1, Fraction(1, 4))  # lower band edge, also the phase speed scale
    rate1 = scale_pow(nu1, Fraction(1, 2))
    e = [
        ScaleEntry("vertical", "domain", ONE, "domain size"),
        ScaleEntry("vertical", "recirculation layer", prandtl / alpha1, "alpha1^(-1) in layer-1 variables"),
        ScaleEntry("vertical", "Prandtl layer", prandtl, "background shear layer thickness"),
        ScaleEntry("vertical", "critical layer", prandtl * alpha1, "y_c ~ c1 ~ nu1^(1/4) in layer-1 variables"),
        ScaleEntry("horizontal", "domain", ONE, "domain size"),
        ScaleEntry("horizontal", "instability periodicity", alpha1, "wavenumber alpha1 ~ nu1^(1/4)"),
        ScaleEntry("time", "domain", ONE, "advective time"),
        ScaleEntry("time", "viscous instability", prandtl / rate1, "inverse growth nu1^(-1/2) in layer-1 time"),
        ScaleEntry("reynolds", "Prandtl layer", reynolds_number(prandtl, ONE.tagged("U_+"), NU), "thickness * U_+ / nu"),
        ScaleEntry("saturation", "Re A < 0", saturation_amplitude("negative"), "cubic balance"),
        ScaleEntry("saturation", "Re A = 0", saturation_amplitude("zero"), "quintic balance"),
        ScaleEntry("saturation", "Re A > 0", saturation_amplitude("positive"), "no cubic saturation"),
    ]
    notes = [
        "prefactors are symbolic; numeric values are exponent-only",
        "the sign of Re A is not computed here; all three saturation cases are listed",
    ]
    return LayerReport("euler_stable", nu, e, notes)


def cascade_report(nu: float, scenario: str) -> LayerReport:
    if not 0 < nu < 1:
        raise ValueError("nu must lie in (0, 1)")
    if scenario == "euler_unstable":
        return _unstable(nu)
    if scenario == "euler_stable":
        return _stable(nu)
    raise ValueError(f"unknown scenario {scenario!r}; use 'euler_unstable' or 'euler_stable'")
