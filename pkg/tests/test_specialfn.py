import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from shearstab import specialfn as sf

complex_pts = st.builds(complex, st.floats(-12, 12), st.floats(-12, 12))


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_frozen_values():
    assert sf.airy_ai(0.0) == pytest.approx(0.3550280538878172, rel=1e-14)
    assert sf.airy_ai(5.0) == pytest.approx(1.0834442813607441e-4, rel=1e-12)
    assert sf.airy_bi(0.0) == pytest.approx(0.6149266274460007, rel=1e-14)
    assert sf.airy_repeated_integral("Ai", 1, 0.0) == pytest.approx(-1 / 3, abs=1e-14)
    assert abs(sf.airy_repeated_integral("Ai", 2, 10.0)) < 1e-6


@pytest.mark.parametrize("z", [0, 2, -3 + 1j])
def test_wronskian(z):
    w = sf.airy_ai(z) * sf.airy_bi(z, True) - sf.airy_ai(z, True) * sf.airy_bi(z)
    assert abs(w - 1 / np.pi) < 1e-10


@given(complex_pts)
def test_wronskian_random(z):
    w = sf.airy_ai(z) * sf.airy_bi(z, True) - sf.airy_ai(z, True) * sf.airy_bi(z)
    scale = max(1.0, abs(sf.airy_ai(z) * sf.airy_bi(z, True)))
    assert abs(w - 1 / np.pi) <= 1e-10 * scale


def ode_residual(fn, z, h=1e-5):
    d2 = (fn(z + h, True) - fn(z - h, True)) / (2 * h)
    scale = (1 + abs(z)) * max(abs(fn(z)), abs(fn(z, True)))
    return abs(d2 - z * fn(z)) / scale


@given(complex_pts)
def test_airy_ode(z):
    assert ode_residual(sf.airy_ai, z) < 1e-8
    assert ode_residual(sf.airy_bi, z) < 1e-8


@pytest.mark.parametrize("kind,base", [("Ai", sf.airy_ai), ("Bi", sf.airy_bi)])
@given(z=st.builds(complex, st.floats(-8, 8), st.floats(-8, 8)))
def test_repeated_integral_derivatives(kind, base, z):
    h = 1e-4
    f1 = lambda s: sf.airy_repeated_integral(kind, 1, s)
    f2 = lambda s: sf.airy_repeated_integral(kind, 2, s)
    d1 = (f1(z + h) - f1(z - h)) / (2 * h)
    d2 = (f2(z + h) - f2(z - h)) / (2 * h)
    assert abs(d1 - base(z)) <= 1e-6 * max(1, abs(base(z)))
    assert abs(d2 - f1(z)) <= 1e-6 * max(1, abs(f1(z)))


@pytest.mark.parametrize("z", [0.3, 2.0, -1.5 + 0.7j, 3.2 * np.exp(-5j * np.pi / 6), 9 - 4j, 20 * np.exp(0.9j)])
def test_repeated_integrals_against_quadrature(z):
    assert rel(sf.airy_repeated_integral("Ai", 1, z), complex(oracles.ai1(z))) < 1e-10
    assert rel(sf.airy_repeated_integral("Ai", 2, z), complex(oracles.ai2(z))) < 1e-10
    if abs(z) < 10:
        assert rel(sf.airy_repeated_integral("Bi", 1, z), complex(oracles.bi1(z))) < 1e-10
        assert rel(sf.airy_repeated_integral("Bi", 2, z), complex(oracles.bi2(z))) < 1e-10


def test_series_asymptotic_seam():
    # both expansions must agree where their regions overlap
    for phase in np.linspace(-np.pi * 0.6, np.pi * 0.6, 9):
        z = 14.0 * np.exp(1j * phase)
        assert rel(sf.ai1_asymptotic(z), complex(oracles.ai1(z))) < 1e-11
    z = 3.9 * np.exp(0.4j)
    assert rel(sf.ai1_series(z), complex(oracles.ai1(z))) < 1e-12


def test_tietjens_against_quadrature():
    assert abs(sf.tietjens(2.0) - oracles.tietjens(2.0)) < 1e-8


def test_tietjens_small_argument_limit():
    target = abs(complex(oracles.ai2(0)) / complex(oracles.ai1(0)))
    vals = [abs(z * sf.tietjens(z)) for z in (1e-2, 1e-3, 1e-4)]
    errs = [abs(v - target) for v in vals]
    assert errs[-1] < 1e-3 and errs[0] > errs[-1]


def test_tietjens_single_crossing():
    z = np.linspace(1, 4, 301)
    im = np.imag(sf.tietjens(z))
    assert np.count_nonzero(np.diff(np.sign(im)) != 0) == 1


def test_underflow_and_range():
    assert sf.airy_repeated_integral("Ai", 2, 900.0) == 0
    with pytest.raises(sf.AiryRangeError):
        sf.airy_ai(2e4)
    with pytest.raises(sf.AiryRangeError):
        sf.airy_bi(200.0)
    with pytest.raises(ValueError):
        sf.tietjens(-1.0)
    with pytest.raises(ValueError):
        sf.airy_repeated_integral("Ci", 1, 0.0)


def test_vectorized_shape():
    z = np.array([[0.1, 1j], [2 - 1j, -3.0]])
    out = sf.airy_repeated_integral("Ai", 2, z)
    assert out.shape == z.shape
    assert out[1, 0] == pytest.approx(sf.airy_repeated_integral("Ai", 2, 2 - 1j))


def test_value_records():
    v = sf.airy_ai_value(1 + 1j)
    assert v.value == pytest.approx(sf.airy_ai(1 + 1j))
    assert v.derivative == pytest.approx(sf.airy_ai(1 + 1j, True))


@pytest.mark.parametrize("z", [3 + 1j, 20 * np.exp(0.3j), 40 * np.exp(-1.55j), 25 * np.exp(1.8j), -8 + 6j])
def test_scaled_family_matches_unscaled(z):
    zeta, f = sf.airy_family_scaled(z)
    ref = [sf.airy_repeated_integral("Ai", 2, z), sf.airy_repeated_integral("Ai", 1, z), sf.airy_ai(z), sf.airy_ai(z, True)]
    assert np.allclose(f * np.exp(-zeta), ref, rtol=1e-12, atol=0)


def test_scaled_family_beyond_overflow():
    z = 150 * np.exp(-1.571j)
    zeta, f = sf.airy_family_scaled(z)
    assert np.all(np.isfinite(f)) and zeta.real < -700
    with pytest.raises(sf.AiryRangeError):
        sf.airy_repeated_integral("Ai", 2, z)


@pytest.mark.parametrize("x", [-0.5, -2.0, -3.7, -9.0])
def test_signed_zero_on_negative_axis(x):
    # the functions are entire, so the sign of a zero imaginary part cannot matter
    up, down = complex(x, 0.0), complex(x, -0.0)
    assert sf.airy_ai(down) == pytest.approx(sf.airy_ai(up), abs=1e-14)
    assert sf.airy_bi(down, True) == pytest.approx(sf.airy_bi(up, True), abs=1e-14)
    for k in (1, 2):
        assert sf.airy_repeated_integral("Ai", k, down) == pytest.approx(sf.airy_repeated_integral("Ai", k, up), rel=1e-12)
