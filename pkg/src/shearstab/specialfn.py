"""Complex Airy functions, their repeated integrals and the Tietjens function.

Ai, Ai', Bi, Bi' come from the AMOS routines wrapped by ``scipy.special.airy``.
The repeated integrals are computed here:

    Ai(1, z) = -int_z^inf Ai(t) dt
    Ai(2, z) =  int_z^inf (t - z) Ai(t) dt
    Bi(1, z) =  int_0^z Bi(t) dt
    Bi(2, z) =  int_0^z (z - t) Bi(t) dt

The Ai family vanishes at +infinity along rays |arg z| < pi/3, the Bi family
vanishes at the origin.  Three regimes are used for Ai(1, .) and Ai(2, .):

* ``|z| <= SERIES_RADIUS``: term-wise integrated Maclaurin series,
* ``|z| >= ASYMPTOTIC_RADIUS`` in the decaying sector: asymptotic expansions
  in zeta = 2/3 z^{3/2},
* elsewhere: Gauss-Legendre panels along the ray, anchored on the asymptotic
  circle (decaying sector, integrating inwards) or on the series circle
  (growing sector, integrating outwards).  Both directions follow the growth
  of the integrand, so neither suffers cancellation.

The Bi family is obtained from the rotated Ai family, using
Bi(z) = e^{i pi/6} Ai(w z) + e^{-i pi/6} Ai(w^2 z) with w = e^{2 i pi/3}.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi, sqrt

import numpy as np
from scipy.special import airy, airye, gammaln

__all__ = [
    "AiryRangeError",
    "AiryValue",
    "SERIES_RADIUS",
    "ASYMPTOTIC_RADIUS",
    "MAX_ARGUMENT",
    "airy_ai",
    "airy_family_scaled",
    "airy_bi",
    "airy_ai_value",
    "airy_bi_value",
    "airy_repeated_integral",
    "ai1_series",
    "ai1_asymptotic",
    "ai2_asymptotic",
    "tietjens",
]

SERIES_RADIUS = 4.0
ASYMPTOTIC_RADIUS = 14.0
MAX_ARGUMENT = 1.0e4

AI0 = 3.0 ** (-2.0 / 3.0) / gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / gamma(1.0 / 3.0)
BIP0 = 3.0 ** (1.0 / 6.0) / gamma(1.0 / 3.0)
AI2_0 = -AIP0  # Ai(2, 0) = int_0^inf t Ai(t) dt

_OMEGA = np.exp(2j * pi / 3)
_ROT = np.exp(-5j * pi / 6)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


class AiryRangeError(OverflowError):
    """Raised when an Airy-type value is not representable in double precision."""


@dataclass(frozen=True)
class AiryValue:
    value: complex
    derivative: complex


def _maclaurin_ai_coefficients(n_terms: int = 96) -> np.ndarray:
    # Ai'' = z Ai  =>  a_{n+3} = a_n / ((n+3)(n+2))
    a = np.zeros(n_terms)
    a[0], a[1] = AI0, AIP0
    for n in range(n_terms - 3):
        a[n + 3] = a[n] / ((n + 3) * (n + 2))
    return a


_AI_TAYLOR = _maclaurin_ai_coefficients()
# coefficients of int_0^z Ai, i.e. of z^{n+1}
_AI_INT_TAYLOR = _AI_TAYLOR / np.arange(1, _AI_TAYLOR.size + 1)


def _asymptotic_coefficients(n_terms: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients s_n, t_n with

    int_z^inf Ai          ~ e^{-zeta} z^{-3/4} / (2 sqrt(pi)) sum s_n zeta^{-n}
    int_z^inf (t - z) Ai  ~ e^{-zeta} z^{-5/4} / (2 sqrt(pi)) sum t_n zeta^{-n}
    """
    k = np.arange(n_terms)
    log_u = gammaln(3 * k + 0.5) - k * np.log(54.0) - gammaln(k + 1) - gammaln(k + 0.5)
    u = np.exp(log_u) * (-1.0) ** k
    s = np.empty(n_terms)
    t = np.empty(n_terms)
    s[0] = t[0] = 1.0
    for n in range(1, n_terms):
        s[n] = u[n] - (n - 0.5) * s[n - 1]
        t[n] = s[n] - (n - 1.0 / 6.0) * t[n - 1]
    return s, t


_ASYM_S, _ASYM_T = _asymptotic_coefficients()


def _as_complex_array(z) -> tuple[np.ndarray, bool]:
    # + 0j clears signed zeros: scipy's complex airy/airye are wrong on the
    # negative real axis when Im z = -0.0, and every function here is entire
    arr = np.asarray(z, dtype=complex) + 0j
    return np.atleast_1d(arr), arr.ndim == 0


def _finish(values: np.ndarray, scalar: bool):
    return complex(values[0]) if scalar else values


def _check_range(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise ValueError("Airy argument must be finite")
    if np.any(np.abs(z) > MAX_ARGUMENT):
        raise AiryRangeError(f"|z| exceeds {MAX_ARGUMENT:g}")


def _checked(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise AiryRangeError(f"{what} overflows double precision")
    return values


def _airy_all(z):
    # + 0j clears signed zeros (see _as_complex_array)
    return airy(np.asarray(z, dtype=complex) + 0j)


def _airye_all(z):
    return airye(np.asarray(z, dtype=complex) + 0j)


def airy_ai(z, derivative: bool = False):
    """Ai(z) (or Ai'(z)) for complex z; vectorised."""
    arr, scalar = _as_complex_array(z)
    _check_range(arr)
    ai, aip, _, _ = _airy_all(arr)
    out = _checked(aip if derivative else ai, "Ai")
    return _finish(out, scalar)


def airy_bi(z, derivative: bool = False):
    """Bi(z) (or Bi'(z)) for complex z; vectorised."""
    arr, scalar = _as_complex_array(z)
    _check_range(arr)
    _, _, bi, bip = _airy_all(arr)
    out = _checked(bip if derivative else bi, "Bi")
    return _finish(out, scalar)


def airy_ai_value(z: complex) -> AiryValue:
    return AiryValue(airy_ai(z), airy_ai(z, derivative=True))


def airy_bi_value(z: complex) -> AiryValue:
    return AiryValue(airy_bi(z), airy_bi(z, derivative=True))


# ---------------------------------------------------------------- Ai(1, .)


def ai1_series(z):
    """Ai(1, z) from the integrated Maclaurin series (accurate for |z| <= 4)."""
    arr, scalar = _as_complex_array(z)
    acc = np.zeros_like(arr)
    for coef in _AI_INT_TAYLOR[::-1]:
        acc = acc * arr + coef
    return _finish(acc * arr - 1.0 / 3.0, scalar)


def _asym_sum(coefs: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    """Sum an asymptotic series in 1/zeta, truncated before its smallest term."""
    inv = 1.0 / zeta
    total = np.zeros_like(zeta)
    term_prev = np.full(zeta.shape, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    power = np.ones_like(zeta)
    for c in coefs:
        term = c * power
        mag = np.abs(term)
        active &= mag < term_prev
        total = np.where(active, total + term, total)
        term_prev = np.where(active, mag, term_prev)
        power = power * inv
    return total


def _asymptotic_prefactor(z: np.ndarray, power: float) -> tuple[np.ndarray, np.ndarray]:
    zeta = (2.0 / 3.0) * z ** 1.5
    with np.errstate(over="ignore", under="ignore"):
        pref = np.exp(-zeta) * z ** power / (2.0 * sqrt(pi))
    return pref, zeta


def ai1_asymptotic(z):
    """Ai(1, z) from the large-|z| expansion; used for |arg z| <= pi/3."""
    arr, scalar = _as_complex_array(z)
    pref, zeta = _asymptotic_prefactor(arr, -0.75)
    return _finish(-pref * _asym_sum(_ASYM_S, zeta), scalar)


def ai2_asymptotic(z):
    """Ai(2, z) from the large-|z| expansion; used for |arg z| <= pi/3."""
    arr, scalar = _as_complex_array(z)
    pref, zeta = _asymptotic_prefactor(arr, -1.25)
    return _finish(pref * _asym_sum(_ASYM_T, zeta), scalar)


def _asymptotic_ok(z: np.ndarray) -> np.ndarray:
    # the constant switched on across the Stokes line arg z = 2 pi/3 stays below
    # double precision inside these sectors
    r = np.abs(z)
    a = np.abs(np.angle(z))
    return ((r >= ASYMPTOTIC_RADIUS) & (a <= pi / 3)) | ((r >= 30.0) & (a <= pi / 2))


def _ray_pair(z: complex) -> tuple[complex, complex]:
    """Ai(1, z), Ai(2, z) by Gauss-Legendre panels along the ray from an anchor.

    Ai(1, z) = Ai(1, z0) + int_{z0}^z Ai
    Ai(2, z) = Ai(2, z0) + (z - z0) Ai(1, z0) + int_{z0}^z (z - t) Ai(t) dt
    """
    r = abs(z)
    direction = z / r
    if abs(np.angle(z)) <= pi / 3 and r > SERIES_RADIUS:
        z0 = ASYMPTOTIC_RADIUS * direction
        a1 = complex(ai1_asymptotic(z0))
        a2 = complex(ai2_asymptotic(z0))
    else:
        z0 = SERIES_RADIUS * direction
        a1 = complex(ai1_series(z0))
        a2 = z0 * a1 - complex(_airy_all(z0)[1])
    length = abs(z - z0)
    # resolve the local wavelength ~ 2 pi / sqrt|t|
    h = min(1.0, 2.0 / sqrt(max(r, ASYMPTOTIC_RADIUS)))
    n_panels = max(1, int(np.ceil(length / h)))
    edges = z0 + (z - z0) * np.linspace(0.0, 1.0, n_panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        w = half[:, None] * _GL_WEIGHTS[None, :]
        ai_t = _airy_all(t)[0]
        i1 = np.sum(w * ai_t)
        i2 = np.sum(w * (z - t) * ai_t)
    return a1 + i1, a2 + (z - z0) * a1 + i2


def _ai_pair(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ai(1, .) and Ai(2, .) on an array of finite arguments."""
    a1 = np.empty_like(z)
    a2 = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS
    asym = _asymptotic_ok(z)
    if small.any():
        zs = z[small]
        a1[small] = ai1_series(zs)
        a2[small] = zs * a1[small] - _airy_all(zs)[1]
    if asym.any():
        a1[asym] = ai1_asymptotic(z[asym])
        a2[asym] = ai2_asymptotic(z[asym])
    for idx in np.flatnonzero(~(small | asym)):
        a1[idx], a2[idx] = _ray_pair(complex(z[idx]))
    return a1, a2


def _underflows(z: np.ndarray) -> np.ndarray:
    # Ai-family values below the smallest double: exp(-Re zeta) < 1e-320
    with np.errstate(over="ignore"):
        zeta = (2.0 / 3.0) * z ** 1.5
    return (np.abs(np.angle(z)) < pi / 3) & (zeta.real > 740.0)


def airy_repeated_integral(kind: str, k: int, z):
    """k-th repeated integral (k = 1, 2) of Ai or Bi at complex z.

    Ai-family values that underflow double precision are returned as 0; values
    that overflow raise :class:`AiryRangeError`.
    """
    if kind not in ("Ai", "Bi"):
        raise ValueError(f"kind must be 'Ai' or 'Bi', got {kind!r}")
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k!r}")
    arr, scalar = _as_complex_array(z)
    if not np.all(np.isfinite(arr)):
        raise ValueError("Airy argument must be finite")
    out = np.zeros_like(arr)
    if kind == "Ai":
        live = ~_underflows(arr)
        _check_range(arr[live])
        if live.any():
            out[live] = _ai_pair(arr[live])[k - 1]
    else:
        _check_range(arr)
        w = _OMEGA
        up = _ai_pair(w * arr)[k - 1]
        down = _ai_pair(np.conj(w) * arr)[k - 1]
        if k == 1:
            out = 1j * (down - up)
        else:
            # int_0^z (z - t) Bi(t) dt from the rotated decaying family
            out = np.exp(5j * pi / 6) * up + np.exp(-5j * pi / 6) * down + sqrt(3.0) * AI2_0
    return _finish(_checked(out, f"{kind}({k}, .)"), scalar)


def airy_family_scaled(z):
    """(zeta, F) with F = e^{zeta} (Ai(2, z), Ai(1, z), Ai(z), Ai'(z)) and zeta = (2/3) z^{3/2}.

    Ratios of these functions stay representable where the functions
    themselves overflow or underflow.  Scalar z only.
    """
    z = complex(z)
    if not np.isfinite(z):
        raise ValueError("Airy argument must be finite")
    if abs(z) > MAX_ARGUMENT:
        raise AiryRangeError(f"|z| = {abs(z):.3g} exceeds {MAX_ARGUMENT:g}")
    zeta = (2.0 / 3.0) * z**1.5
    arr = np.array([z])
    # past |arg z| = pi/2 the recessive correction is below e^{Re zeta} relative
    wide = abs(z) >= ASYMPTOTIC_RADIUS and abs(np.angle(z)) <= 0.62 * pi and zeta.real < -40.0
    if _asymptotic_ok(arr)[0] or wide:
        lead = 1.0 / (2.0 * sqrt(pi))
        a2 = lead * z**-1.25 * complex(_asym_sum(_ASYM_T, np.array([zeta]))[0])
        a1 = -lead * z**-0.75 * complex(_asym_sum(_ASYM_S, np.array([zeta]))[0])
        e_ai, e_dai, *_ = _airye_all(z)
        return zeta, np.array([a2, a1, e_ai, e_dai])
    vals = _ai_pair(arr)
    ai, dai, *_ = _airy_all(z)
    return zeta, np.array([vals[1][0], vals[0][0], ai, dai]) * np.exp(zeta)


def tietjens(z):
    """Ti(z) = Ai(2, z e^{-5i pi/6}) / (z e^{-5i pi/6} Ai(1, z e^{-5i pi/6})).

    Defined for real z > 0; complex z is accepted for root finding.
    """
    arr, scalar = _as_complex_array(z)
    if np.any((np.abs(arr.imag) == 0) & (arr.real <= 0)):
        raise ValueError("tietjens is defined for z > 0")
    w = arr * _ROT
    ai1 = airy_repeated_integral("Ai", 1, w)
    ai2 = airy_repeated_integral("Ai", 2, w)
    return _finish(ai2 / (w * ai1), scalar)
