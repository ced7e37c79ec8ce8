import numpy as np
import pytest

from r4bp import equilibria, integrate
from r4bp.errors import DomainError, PreconditionError, SingularityEvent, StepBudgetExceeded
from r4bp.integrate import IntegratorSettings, Trajectory, jacobi_drift, propagate

from conftest import SUN_JUPITER_MU


def test_tableau_matches_scipy():
    rk = pytest.importorskip("scipy.integrate._ivp.rk")
    np.testing.assert_allclose(integrate.C, rk.RK45.C.tolist() + [1.0])
    np.testing.assert_allclose(integrate.B5[:6], rk.RK45.B)
    np.testing.assert_allclose(integrate.E, -rk.RK45.E, atol=1e-17)
    np.testing.assert_allclose(integrate.P, rk.RK45.P)


def test_tableau_order_conditions():
    c = integrate.C
    b = integrate.B5
    assert b.sum() == pytest.approx(1, abs=1e-15)
    for k in range(1, 5):
        assert b @ c ** k == pytest.approx(1 / (k + 1), abs=1e-14)
    for i in range(1, 7):
        assert integrate.A[i].sum() == pytest.approx(c[i], abs=1e-14)


def test_harmonic_full_period():
    traj = propagate(integrate.harmonic_field(), [1.0, 0.0], (0, 2 * np.pi))
    np.testing.assert_allclose(traj.states[-1], [1.0, 0.0], atol=1e-9)
    assert traj.times[-1] == 2 * np.pi


def test_dense_output_samples(rng):
    t_eval = np.sort(rng.uniform(0, 10, 50))
    traj = propagate(integrate.harmonic_field(), [1.0, 0.0], (0, 10), IntegratorSettings(1e-10, 1e-12),
                     t_eval=t_eval)
    np.testing.assert_array_equal(traj.times, t_eval)
    np.testing.assert_allclose(traj.states[:, 0], np.cos(t_eval), atol=1e-8)


def test_fixed_step_fifth_order():
    def err(h):
        n = int(round(2 * np.pi / h))
        traj = propagate(integrate.harmonic_field(), [1.0, 0.0], (0, 2 * np.pi),
                         IntegratorSettings(fixed_step=2 * np.pi / n))
        return np.linalg.norm(traj.states[-1] - [1.0, 0.0])
    ratio = err(2 * np.pi / 40) / err(2 * np.pi / 80)
    assert ratio == pytest.approx(32, rel=0.15)


def test_rest_at_l1_before_instability_amplifies_rounding():
    # L1 is hyperbolic (real exponent ~2.5 at this mu), so the ~1e-16 residual
    # of the closed-form position grows like exp(2.5 t); at t = 3 it is still tiny
    p = equilibria.equilibrium_points(SUN_JUPITER_MU).L1
    traj = propagate(integrate.limit_field(SUN_JUPITER_MU), [p.x, p.y, 0, 0, 0, 0], (0, 3))
    assert np.abs(traj.states[:, :2] - [p.x, p.y]).max() < 1e-12


def test_exact_fixed_point_over_long_span():
    traj = propagate(integrate.quadratic_field(0.3), np.zeros(6), (0, 100))
    assert np.abs(traj.states).max() == 0.0


def test_drift_grows_with_tolerance():
    s0 = [0.3, 0.0, 0.0, 0.0, np.sqrt(1 / 0.3) - 0.3, 0.0]
    field = integrate.limit_field(SUN_JUPITER_MU)
    drifts = [jacobi_drift(propagate(field, s0, (0, 20), IntegratorSettings(tol, tol)))
              for tol in (1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6)]
    assert all(a < b for a, b in zip(drifts, drifts[1:])), drifts


def test_quadratic_field_control():
    field = integrate.quadratic_field(0.3)
    traj = propagate(field, [0.2, -0.1, 0.05, 0.0, 0.1, 0.0], (0, 10))
    assert jacobi_drift(traj) <= 1e-10


def test_single_sample_drift_zero():
    assert jacobi_drift(Trajectory(np.zeros(1), np.zeros((1, 6)), np.array([3.0]))) == 0.0
    with pytest.raises(PreconditionError):
        jacobi_drift(Trajectory(np.zeros(0), np.zeros((0, 6)), np.zeros(0)))


def test_time_reversal():
    field = integrate.limit_field(SUN_JUPITER_MU)
    s0 = np.array([0.3, 0.0, 0.0, 0.0, np.sqrt(1 / 0.3) - 0.3, 0.0])
    fwd = propagate(field, s0, (0, 0.5))
    back = propagate(field.reversed(), fwd.states[-1], (0, 0.5))
    assert np.abs(back.states[-1] - s0).max() < 10 * 1e-12


def test_planar_stays_planar():
    traj = propagate(integrate.limit_field(0.2), [0.3, 0.1, 0.0, -0.5, 1.0, 0.0], (0, 20))
    assert np.abs(traj.states[:, [2, 5]]).max() <= 1e-12


def test_collision_is_an_event():
    # radial infall onto m3
    with pytest.raises(SingularityEvent) as exc:
        propagate(integrate.limit_field(0.5), [0.0, 0.0, 0.5, 0, 0, 0], (0, 5))
    assert exc.value.state is not None


def test_step_budget():
    with pytest.raises(StepBudgetExceeded):
        propagate(integrate.harmonic_field(), [1.0, 0.0], (0, 100), IntegratorSettings(max_steps=5))


@pytest.mark.parametrize("kw", [dict(rel_tol=1e-16), dict(abs_tol=0.1), dict(max_steps=0)])
def test_settings_validation(kw):
    with pytest.raises(DomainError):
        IntegratorSettings(**kw)


def test_t_span_must_increase():
    with pytest.raises(PreconditionError):
        propagate(integrate.harmonic_field(), [1.0, 0.0], (1, 0))
