import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shearstab import semigroup as S
from shearstab.grid import GridFunction, clustered_grid
from shearstab.profiles import builtin_profile
from shearstab.rayleigh import ContourResolutionError

TANH = builtin_profile("tanh")
EXP = builtin_profile("exp_layer")


def bump(y, center=1.0, width=0.5):
    return np.exp(-((y - center) ** 2) / width)


def test_poisson_kernel_value():
    assert S.poisson_kernel(1.0, 2.0, 1.0) == pytest.approx((np.exp(-1) - np.exp(-3)) / 2, rel=1e-14)
    assert S.poisson_kernel(1.0, 2.0, 1.0) == pytest.approx(0.159046, abs=1e-6)


def test_poisson_zero():
    y = np.linspace(0, 20, 101)
    assert np.all(S.poisson_invert(0.5, GridFunction(y, np.zeros(101))).values == 0)


@given(st.floats(0.2, 3.0), st.floats(0.5, 4.0))
def test_poisson_round_trip(alpha, center):
    y = np.linspace(0, 20, 2048)
    w = GridFunction(y, bump(y, center) * (1 + 0.5j), alpha)
    psi = S.poisson_invert(alpha, w).values
    h = y[1] - y[0]
    lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / h**2 - alpha**2 * psi[1:-1]
    err = np.sqrt(np.trapezoid(np.abs(lap + w.values[1:-1]) ** 2, y[1:-1]))
    assert err <= 1e-4
    assert psi[0] == 0


def test_poisson_matches_quadrature_on_nonuniform_grid():
    alpha = 0.7
    y = clustered_grid(20, 600, 0.3)
    w = bump(y, 1.5)
    psi, dpsi = S.poisson_invert(alpha, GridFunction(y, w, alpha), derivative=True)
    fine = np.linspace(0, 20, 20001)
    ref = np.trapezoid(S.poisson_kernel(alpha, 2.0, fine) * bump(fine, 1.5), fine)
    assert np.interp(2.0, y, psi.values.real) == pytest.approx(ref, rel=1e-4)
    assert abs(dpsi.values[0] - np.trapezoid(np.exp(-alpha * fine) * bump(fine, 1.5), fine)) < 1e-5


def test_truncation_warning():
    y = np.linspace(0, 5, 51)
    with pytest.warns(S.TruncationWarning):
        S.poisson_invert(0.5, GridFunction(y, np.ones(51)))


def test_mode_state_norms_and_csv(tmp_path):
    y = np.linspace(0, 15, 512)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    n = s.norms()
    assert set(n) == {"t", "norm_psi_inf", "norm_dpsi_inf", "norm_omega_inf"}
    assert n["norm_omega_inf"] == pytest.approx(1.0, abs=1e-3)
    u, v = s.velocity()
    assert np.allclose(v.values, -0.5j * s.psi.values)
    text = S.trajectory_csv([s, s], tmp_path / "t.csv")
    assert text.count("\n") == 3


def test_cfl_guard():
    y = np.linspace(0, 15, 256)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    with pytest.raises(ValueError):
        S.euler_trajectory(TANH, s, [1.0], dt=2.0)


def test_euler_decay_bound():
    y = np.linspace(0, 15, 1024)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    traj = S.euler_trajectory(TANH, s, np.geomspace(10, 100, 11), 0.5)
    weighted = [np.sqrt(1 + t.time**2) * (0.5 * t.norms()["norm_psi_inf"] + t.norms()["norm_dpsi_inf"]) for t in traj]
    assert max(weighted) < 3 * min(weighted)


def test_damping_diagnostics_requires_span():
    y = np.linspace(0, 15, 256)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    traj = S.euler_trajectory(TANH, s, [10.0, 20.0, 30.0], 0.5)
    with pytest.raises(S.InsufficientDataError):
        S.damping_diagnostics(traj, TANH)


def test_damping_cauchy_shape():
    y = np.linspace(0, 15, 2048)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    traj = S.euler_trajectory(TANH, s, np.geomspace(1, 100, 41), 0.25)
    rep = S.damping_diagnostics(traj, TANH)
    slope, omega_inf = rep
    assert slope == pytest.approx(-1.0, abs=0.15)
    scaled = [t1 * d for t1, t2, d in rep.cauchy if t1 <= 0.5 * t2]
    assert max(scaled) <= 2 * min(scaled)
    assert np.isfinite(rep.cauchy_constant) and omega_inf.sup() > 0


def test_ns_viscous_decay():
    y = np.linspace(0, 15, 512)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    traj = S.ns_trajectory(TANH, s, 0.1, np.linspace(1, 10, 10), 0.05)
    w = [t.norms()["norm_omega_inf"] for t in traj]
    assert all(b < a for a, b in zip(w, w[1:]))


def test_ns_wall_conditions():
    y = clustered_grid(20, 1024, 0.05)
    s = S.ModeState.from_vorticity(0.3, y, y * np.exp(-y))
    out = S.evolve_linear_ns(EXP, s, 1e-4, 5.0, 0.1)
    _, dpsi = S.poisson_invert(0.3, out.omega, derivative=True)
    assert abs(out.psi.values[0]) == 0
    assert abs(dpsi.values[0]) < 1e-8 * out.norms()["norm_omega_inf"]


@pytest.mark.parametrize("profile", [TANH, EXP], ids=["tanh", "exp_layer"])
def test_contour_reproduces_initial_stream_function(profile):
    y = np.linspace(0, 20, 1024)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    psi0 = S.resolvent_contour_evolve(profile, 0.5, s, 0.0, S.ContourSpec.rectangle(0, 1))
    assert np.max(np.abs(psi0.values - s.psi.values)) <= 1e-4 * s.psi.sup()


def test_contour_matches_stepper_tanh():
    y = np.linspace(0, 20, 2048)
    s = S.ModeState.from_vorticity(0.5, y, bump(y))
    steps = S.euler_trajectory(TANH, s, [5.0], 0.05)
    psi = S.resolvent_contour_evolve(TANH, 0.5, s, [5.0], S.ContourSpec.rectangle(0, 1))
    assert np.max(np.abs(steps[0].psi.values - psi[0].values)) <= 1e-3 * steps[0].psi.sup()


def test_contour_vorticity_zero_and_guard():
    y = np.linspace(0, 20, 512)
    zero = GridFunction(y, np.zeros(512), 0.5)
    c = S.ContourSpec.rectangle(0, 1)
    assert np.all(S.vorticity_contour(TANH, 0.5, zero, 3.0, [0.5, 2.0], c) == 0)
    with pytest.raises(ContourResolutionError):
        S.vorticity_contour(TANH, 0.5, GridFunction(y, bump(y), 0.5), 1.0, [0.5], S.ContourSpec.rectangle(0, 1, height=0.02, panel_length=0.5))


def test_contour_vorticity_at_time_zero():
    y = np.linspace(0, 20, 2048)
    w0 = GridFunction(y, bump(y), 0.5)
    pts = np.array([0.5, 1.0, 2.0])
    got = S.vorticity_contour(TANH, 0.5, w0, 0.0, pts, S.ContourSpec.rectangle(0, 1))
    assert np.allclose(got, bump(pts), atol=1e-4)


def test_contour_spec_nodes():
    c = S.ContourSpec.rectangle(0.0, 1.0, margin=0.2, height=0.1)
    cs, ws = c.nodes()
    assert abs(ws.sum()) < 1e-12  # closed contour
    assert np.sum(ws / (cs - 0.5)) == pytest.approx(2j * np.pi, abs=1e-10)
    with pytest.raises(ValueError):
        S.ContourSpec((0j, 0.5 + 0j, 1j)).validate((0.0, 1.0))
