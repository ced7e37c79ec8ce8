from functools import partial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from r4bp import equilibria, hill, model
from r4bp.errors import DomainError, SingularityError
from r4bp.integrate import IntegratorSettings, limit_field, propagate

from conftest import central_gradient

coords = st.floats(-3, 3, allow_nan=False)


def test_mass_ratio_range():
    hill.MassRatio(0.0)
    hill.MassRatio(0.5)
    with pytest.raises(DomainError):
        hill.MassRatio(0.51)


def test_hamiltonian_hand_value():
    assert hill.hamiltonian_limit([1, 0, 0, 0, 0, 0], 0.5) == pytest.approx(-7 / 8, abs=1e-15)


def test_omega_hand_value():
    assert hill.omega_limit([1.0, 0.0, 0.0], 0.5) == pytest.approx(11 / 8, abs=1e-15)


@given(coords, coords, coords, coords, coords, coords, st.floats(0, 0.5))
def test_hamiltonian_antipodal_symmetry(x, y, z, px, py, pz, mu):
    if x * x + y * y + z * z < 1e-4:
        return
    h = hill.hamiltonian_limit([x, y, z, px, py, pz], mu)
    assert hill.hamiltonian_limit([-x, -y, z, -px, -py, pz], mu) == pytest.approx(h, rel=1e-12, abs=1e-12)


@given(coords, coords, coords, st.floats(0, 0.5))
def test_omega_even(x, y, z, mu):
    if x * x + y * y + z * z < 1e-4:
        return
    assert hill.omega_limit([-x, -y, z], mu) == pytest.approx(hill.omega_limit([x, y, z], mu), rel=1e-13)


def test_hamiltonian_equals_minus_half_jacobi(rng):
    for _ in range(100):
        mu = rng.uniform(0, 0.5)
        s = rng.uniform(-2, 2, 6)
        v = hill.momenta_velocity_map(s, "to_velocity")
        C = model.jacobi_constant(v, partial(hill.omega_limit, mu=mu))
        assert -2 * hill.hamiltonian_limit(s, mu) == pytest.approx(C, rel=1e-12, abs=1e-12)
        # H = |v|^2 / 2 - Omega
        assert hill.hamiltonian_limit(s, mu) == pytest.approx(
            0.5 * v[3:] @ v[3:] - hill.omega_limit(v[:3], mu), abs=1e-12)


def test_momenta_round_trip(rng):
    for _ in range(50):
        s = rng.normal(size=6)
        back = hill.momenta_velocity_map(hill.momenta_velocity_map(s, "to_velocity"), "to_momenta")
        np.testing.assert_allclose(back, s, atol=1e-15)
    assert hill.momenta_velocity_map([2.0, 0.0, 0.0, 0.7, 0.1, 0.0])[3] == 0.7


def test_quadratic_part_matches_interaction_matrix(rng):
    for _ in range(50):
        mu = rng.uniform(0, 0.5)
        z = rng.uniform(-2, 2, 2)
        quad = hill.omega_limit(z, mu) - 1 / np.linalg.norm(z)
        assert quad == pytest.approx(0.5 * z @ equilibria.interaction_matrix(mu) @ z, abs=1e-14)


def test_mu_zero_reproduces_l4_quadratic_form():
    # H - kinetic - kernel at unit vectors isolates x^2/8, xy, -5y^2/8
    def potential(x, y):
        return hill.hamiltonian_limit([x, y, 0, 0, 0, 0], 0.0) + 1 / np.hypot(x, y)
    assert potential(1, 0) == 1 / 8
    assert potential(0, 1) == -5 / 8
    assert potential(1, 1) - potential(1, 0) - potential(0, 1) == pytest.approx(-3 * np.sqrt(3) / 4, abs=1e-15)


def test_derivatives_vs_finite_differences(rng):
    for _ in range(100):
        mu = rng.uniform(0, 0.5)
        q = rng.uniform(-2, 2, 3)
        if np.linalg.norm(q) < 0.3:
            continue
        g = central_gradient(lambda p: hill.omega_limit(p, mu), q)
        np.testing.assert_allclose(hill.grad_omega(q, mu), g, atol=1e-6)
        h = np.array([central_gradient(lambda p, k=k: hill.grad_omega(p, mu)[k], q, 1e-4) for k in range(3)])
        np.testing.assert_allclose(hill.hess_omega(q, mu), h, atol=1e-4)
        np.testing.assert_array_equal(hill.hess_omega(q, mu), hill.hess_omega(q, mu).T)


def test_vertical_force_is_restoring():
    # sign follows from the -z^2/2 term of the effective potential
    g = hill.grad_omega([0.5, 0.3, 0.1], 0.2)
    assert g[2] < 0
    assert hill.grad_omega([0.5, 0.3, 0.0], 0.2)[2] == 0.0


def test_origin_is_singular():
    for f in (hill.omega_limit, hill.grad_omega, hill.hess_omega):
        with pytest.raises(SingularityError):
            f([0.0, 0.0, 0.0], 0.1)
    with pytest.raises(SingularityError):
        hill.hamiltonian_limit(np.zeros(6), 0.1)


def test_rest_at_l1_is_fixed():
    p = equilibria.equilibrium_points(0.3).L1
    d = hill.eom_limit([p.x, p.y, 0, 0, 0, 0], 0.3)
    np.testing.assert_allclose(d, 0.0, atol=1e-14)


def test_vertical_oscillation_period_at_l1():
    mu = 0.5
    p = equilibria.equilibrium_points(mu).L1
    amp = 1e-7
    omega_z = np.sqrt(13) / 2
    period = 2 * np.pi / omega_z
    traj = propagate(limit_field(mu), [p.x, p.y, amp, 0, 0, 0], (0, period),
                     IntegratorSettings(1e-13, 1e-15), t_eval=np.linspace(0, period, 401))
    z = traj.states[:, 2]
    # z(t) = amp cos(omega_z t) to first order; L1 is unstable in-plane, keep the span short
    np.testing.assert_allclose(z, amp * np.cos(omega_z * traj.times), atol=amp * 1e-4)


def test_antipodal_trajectories():
    mu = 0.2
    s0 = np.array([0.4, 0.1, 0.05, 0.2, 1.1, 0.0])
    mirror = np.array([-1, -1, 1, -1, -1, 1.0])
    t_eval = np.linspace(0, 3, 31)
    a = propagate(limit_field(mu), s0, (0, 3), t_eval=t_eval)
    b = propagate(limit_field(mu), s0 * mirror, (0, 3), t_eval=t_eval)
    np.testing.assert_allclose(b.states, a.states * mirror, atol=1e-9)


def test_planar_subspace_invariant():
    traj = propagate(limit_field(0.1), [0.4, 0.0, 0.0, 0.0, 1.2, 0.0], (0, 10))
    assert np.abs(traj.states[:, [2, 5]]).max() == 0.0
