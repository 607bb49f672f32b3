import numpy as np
import pytest
from hypothesis import example, given
from hypothesis import strategies as st
from scipy.special import erf

from shearstab.grid import GridFunction, GridSpec, ResolutionError, clustered_grid, uniform_grid
from shearstab.profiles import (
    ConfigurationError,
    DomainError,
    HeatState,
    builtin_profile,
    critical_point,
    heat_evolve,
    tabulated_profile,
)

NAMES = ["tanh", "exp_layer", "inflected"]


@pytest.mark.parametrize("name", NAMES)
def test_builtin_boundary_values(name):
    p = builtin_profile(name, 1.0)
    assert abs(p.eval(0.0)) < 1e-15
    assert abs(p.eval(40.0) - 1.0) < 1e-12


@pytest.mark.parametrize("name", NAMES)
def test_derivatives_match_finite_differences(name):
    p = builtin_profile(name)
    y = np.linspace(0.1, 6, 40)
    h = 1e-5
    assert np.allclose((p.eval(y + h) - p.eval(y - h)) / (2 * h), p.deriv1(y), atol=1e-9)
    assert np.allclose((p.deriv1(y + h) - p.deriv1(y - h)) / (2 * h), p.deriv2(y), atol=1e-9)


def test_shape_flags():
    assert builtin_profile("exp_layer").concave and builtin_profile("tanh").concave
    assert not builtin_profile("inflected").concave


def test_bad_profile_config():
    with pytest.raises(ConfigurationError):
        builtin_profile("parabola")
    with pytest.raises(ConfigurationError):
        builtin_profile("tanh", 0.0)


def test_critical_points():
    assert critical_point(builtin_profile("exp_layer"), 0.5) == pytest.approx(np.log(2), abs=1e-12)
    assert critical_point(builtin_profile("tanh"), 0) == 0
    p = builtin_profile("tanh")
    c = 0.1 + 0.05j
    assert abs(p.eval(critical_point(p, c)) - c) < 1e-12


@given(st.floats(0.05, 0.95), st.floats(-0.2, 0.2))
@example(0.95, 0.125)
def test_critical_point_residual(re, im):
    p = builtin_profile("exp_layer")
    y = critical_point(p, complex(re, im))
    assert abs(p.eval(y) - complex(re, im)) < 1e-12


def test_tabulated_refuses_complex():
    y = np.linspace(0, 10, 200)
    p = tabulated_profile(y, 1 - np.exp(-y))
    assert p.eval(1.0) == pytest.approx(1 - np.exp(-1), abs=1e-3)
    with pytest.raises(DomainError):
        p.eval(1.0 + 0.1j)
    with pytest.raises(DomainError):
        critical_point(p, 0.3 + 0.1j)


@pytest.mark.parametrize("scheme,dt,steps", [("implicit", 1e-3, 1000), ("explicit", 5e-5, 20000)])
def test_heat_similarity_solution(scheme, dt, steps):
    y = np.linspace(0, 30, 2048)
    out = heat_evolve(HeatState(y, erf(y / 2)), dt, steps, scheme)
    assert out.time == pytest.approx(1.0)
    assert np.max(np.abs(out.values - erf(y / (2 * np.sqrt(2.0))))) < 1e-3


def test_heat_shear_mass_nonincreasing():
    state = HeatState.from_profile(builtin_profile("tanh"), 20.0, 1024)
    mass = []
    for _ in range(5):
        mass.append(np.trapezoid(np.abs(np.gradient(state.values, state.grid)), state.grid))
        state = heat_evolve(state, 1e-2, 20)
    assert all(b <= a + 1e-12 for a, b in zip(mass, mass[1:]))


def test_heat_explicit_stability_guard():
    y = np.linspace(0, 10, 101)
    with pytest.raises(ValueError):
        heat_evolve(HeatState(y, erf(y)), 0.01, 1, "explicit")


def test_heat_csv_roundtrip(tmp_path):
    s = HeatState.from_profile(builtin_profile("exp_layer"), 10.0, 64)
    s = heat_evolve(s, 1e-3, 3)
    s.to_csv(tmp_path / "u.csv")
    back = HeatState.from_csv(tmp_path / "u.csv")
    assert back.time == s.time
    assert np.array_equal(back.values, s.values)


def test_grids():
    g = uniform_grid(10, 11)
    assert g[0] == 0 and g[-1] == 10
    c = clustered_grid(10, 101, 0.5)
    assert c[0] == 0 and c[-1] == pytest.approx(10) and np.all(np.diff(c) > 0)
    assert np.diff(c)[0] < np.diff(c)[-1]
    assert np.array_equal(GridSpec(10, 11).nodes(), g)
    with pytest.raises(ValueError):
        GridSpec(10, 11, "spiral").nodes()
    assert issubclass(ResolutionError, ValueError)


def test_grid_function_csv(tmp_path):
    y = np.linspace(0, 1, 5)
    f = GridFunction(y, np.exp(1j * y), alpha=0.5)
    f.to_csv(tmp_path / "f.csv")
    g = GridFunction.from_csv(tmp_path / "f.csv")
    assert np.allclose(g.values, f.values, rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        GridFunction(y, np.ones(3))
