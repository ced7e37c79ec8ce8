import numpy as np
import pytest

from r4bp import equilibria, hill
from r4bp.errors import DegenerateParameterError, DomainError

from conftest import HEKTOR_M3, SUN_JUPITER_MU


def test_interaction_matrix_diagonal_case():
    np.testing.assert_array_equal(equilibria.interaction_matrix(0.5), np.diag([0.75, 2.25]))


@pytest.mark.parametrize("mu", [0.0, 0.1, 0.25, 0.5])
def test_interaction_matrix_trace_and_det(mu):
    M = equilibria.interaction_matrix(mu)
    assert np.trace(M) == 3.0
    # 27/16 - 27/16 (1 - 2mu)^2 = 27/4 mu (1 - mu)
    assert np.linalg.det(M) == pytest.approx(6.75 * mu * (1 - mu), abs=1e-14)


def test_spectral_endpoints():
    sd = equilibria.spectral_decomposition(0.0)
    assert (sd.d, sd.lambda1, sd.lambda2) == (1.0, 0.0, 3.0)
    sd = equilibria.spectral_decomposition(0.5)
    assert (sd.d, sd.lambda1, sd.lambda2) == (0.5, 0.75, 2.25)
    np.testing.assert_array_equal(sd.v1, [1, 0])
    np.testing.assert_array_equal(sd.v2, [0, 1])


def test_spectral_sun_jupiter_residuals():
    mu = SUN_JUPITER_MU
    sd = equilibria.spectral_decomposition(mu)
    M = equilibria.interaction_matrix(mu)
    assert np.linalg.norm(M @ sd.v1 - sd.lambda1 * sd.v1) < 1e-13
    assert np.linalg.norm(M @ sd.v2 - sd.lambda2 * sd.v2) < 1e-13
    assert abs(sd.lambda1 + sd.lambda2 - 3) < 1e-14


def test_spectral_properties_dense_sweep():
    for mu in np.linspace(0, 0.5, 1001)[1:]:
        sd = equilibria.spectral_decomposition(mu)
        M = equilibria.interaction_matrix(mu)
        assert 0.5 <= sd.d <= 1.0
        V = np.column_stack([sd.v1, sd.v2])
        assert np.abs(V.T @ V - np.eye(2)).max() < 1e-12
        assert np.abs(M @ V - V * [sd.lambda1, sd.lambda2]).max() < 1e-12
        assert abs(sd.lambda1 + sd.lambda2 - 3) < 1e-13
        assert abs(sd.lambda1 * sd.lambda2 - 6.75 * mu * (1 - mu)) < 1e-13
        assert sd.v1[1] >= 0 and sd.v2[1] >= 0


def test_equilibria_diagonal_case():
    eq = equilibria.equilibrium_points(0.5)
    np.testing.assert_allclose(eq.L1.as_array(), [0, (4 / 9) ** (1 / 3)], atol=1e-15)
    np.testing.assert_allclose(eq.L3.as_array(), [(4 / 3) ** (1 / 3), 0], atol=1e-15)


@pytest.mark.parametrize("mu", [1e-3, 0.05, 0.25, 0.4, 0.5])
def test_equilibrium_radii_and_symmetry(mu):
    sd = equilibria.spectral_decomposition(mu)
    eq = equilibria.equilibrium_points(mu)
    assert np.linalg.norm(eq.L1.as_array()) == pytest.approx(sd.lambda2 ** (-1 / 3), rel=1e-14)
    assert np.linalg.norm(eq.L3.as_array()) == pytest.approx(sd.lambda1 ** (-1 / 3), rel=1e-14)
    np.testing.assert_array_equal(eq.L2.as_array(), -eq.L1.as_array())
    np.testing.assert_array_equal(eq.L4.as_array(), -eq.L3.as_array())
    for p in eq.points().values():
        assert np.linalg.norm(hill.grad_omega(p.as_array(), mu)) < 1e-10


def test_mu_zero_degenerate():
    with pytest.raises(DegenerateParameterError, match="lambda1"):
        equilibria.equilibrium_points(0.0)
    eq = equilibria.equilibrium_points(0.0, require_all=False)
    assert eq.L3 is None and eq.L4 is None
    assert np.linalg.norm(hill.grad_omega(eq.L1.as_array(), 0.0)) < 1e-12


def test_oracle_mu_quarter():
    oracle = equilibria.numeric_equilibria_oracle(0.25, 3.0, 40)
    closed = equilibria.equilibrium_points(0.25)
    assert oracle.provenance == "numeric"
    np.testing.assert_allclose(oracle.as_array(), closed.as_array(), atol=1e-8)
    np.testing.assert_allclose(oracle.L2.as_array(), -oracle.L1.as_array(), atol=1e-10)
    np.testing.assert_allclose(oracle.L4.as_array(), -oracle.L3.as_array(), atol=1e-10)


def test_oracle_sun_jupiter():
    oracle = equilibria.numeric_equilibria_oracle(SUN_JUPITER_MU)
    np.testing.assert_allclose(oracle.as_array(), equilibria.equilibrium_points(SUN_JUPITER_MU).as_array(),
                               atol=1e-8)


def test_oracle_extent_expands_for_tiny_mu():
    mu = 1e-6
    oracle = equilibria.numeric_equilibria_oracle(mu)
    lam1 = equilibria.spectral_decomposition(mu).lambda1
    assert oracle.meta["extent"] == pytest.approx(1.5 * lam1 ** (-1 / 3), rel=1e-9)
    assert np.linalg.norm(oracle.L3.as_array()) == pytest.approx(lam1 ** (-1 / 3), rel=1e-8)


def test_continuation_hektor():
    eq = equilibria.r4bp_equilibria_near_m3(SUN_JUPITER_MU, HEKTOR_M3)
    assert len(eq.points()) == 4
    d = equilibria.scaled_distances(SUN_JUPITER_MU, HEKTOR_M3)
    assert d["L1"] < 1e-4 and d["L3"] < 2e-2


def test_continuation_monotone():
    series = [equilibria.scaled_distances(SUN_JUPITER_MU, m3) for m3 in (1e-6, 1e-8, 1e-10, 1e-12)]
    for name in equilibria.LABELS:
        vals = [s[name] for s in series]
        assert all(a > b for a, b in zip(vals, vals[1:])), (name, vals)


@pytest.mark.parametrize("m3", [0.0, 1e-3])
def test_continuation_range(m3):
    with pytest.raises(DomainError):
        equilibria.r4bp_equilibria_near_m3(0.25, m3)
