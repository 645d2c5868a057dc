"""
Unit tests for RNEA, ABA, CRBA, mass-matrix inverse application and the kinematics cache
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sorbd.models.errors import FactorizationError, ShapeMismatchError, SingularInertiaError
from sorbd.models.model import Model
from sorbd.models.spatial import SpatialInertia
from sorbd.services.dynamics import (
    ZERO_GRAVITY, _invert_joint_inertia, aba, compute_kinematics_cache, crba, factorize_mass_matrix,
    minv_apply, normalize_configs, rnea, tau_from_cache,
)
from tests.helpers import assert_close

ZOO = ('pendulum', 'double_pendulum', 'serial_chain', 'binary_tree', 'mixed_chain', 'floating_chain', 'mixed_tree')


@pytest.mark.unit
class TestClosedForm:
    """Test models with hand-derivable dynamics"""

    def test_pendulum_mass_matrix(self, pendulum):
        """Test M of a single revolute-z link is its z inertia about the joint"""
        expected = pendulum.inertias[0].rotational_inertia[2, 2]
        for q in (0.0, 0.7, -2.1):
            assert_allclose(crba(pendulum, [q]), [[expected]], rtol=1e-14)
            assert rnea(pendulum, [q], [0.0], [1.0], gravity=ZERO_GRAVITY)[0] == pytest.approx(expected)

    def test_vertical_axis_has_no_gravity_torque(self, pendulum):
        """Test gravity along z exerts no torque about a z joint"""
        assert rnea(pendulum, [0.9], [0.0], [0.0])[0] == pytest.approx(0.0, abs=1e-14)

    def test_prismatic_lift(self):
        """Test a point-like mass on a vertical slider needs m (qdd + g)"""
        inertia = SpatialInertia.from_mass_com_inertia(2.0, np.zeros(3), 0.01 * np.eye(3))
        model = Model((-1,), ('prismatic-z',), (inertia,), ())
        assert rnea(model, [0.3], [0.5], [1.0])[0] == pytest.approx(2.0 * (1.0 + 9.81))
        assert aba(model, [0.3], [0.5], [2.0 * 9.81])[0] == pytest.approx(0.0, abs=1e-13)


@pytest.mark.unit
class TestConsistency:
    """Test the algorithms against each other on every fixture model"""

    @pytest.mark.parametrize("name", ZOO)
    def test_aba_inverts_rnea(self, name, model_zoo, state_for):
        """Test aba(q, qd, rnea(q, qd, qdd)) = qdd"""
        model = model_zoo[name]
        state = state_for(model, seed=1)
        tau = rnea(model, state.q, state.qd, state.qdd)
        assert_close(aba(model, state.q, state.qd, tau), state.qdd, atol=1e-10)

    @pytest.mark.parametrize("name", ZOO)
    def test_crba_matches_rnea(self, name, model_zoo, state_for):
        """Test rnea = M qdd + rnea(q, qd, 0) and M is symmetric positive definite"""
        model = model_zoo[name]
        state = state_for(model, seed=2)
        M = crba(model, state.q)
        assert_close(M, M.T, atol=0)
        assert np.all(np.linalg.eigvalsh(M) > 0)
        bias = rnea(model, state.q, state.qd, np.zeros(model.n))
        assert_close(rnea(model, state.q, state.qd, state.qdd), M @ state.qdd + bias, atol=1e-11)

    @pytest.mark.parametrize("name", ZOO)
    def test_cache_reproduces_rnea(self, name, model_zoo, state_for):
        """Test tau = S^T fC from the kinematics cache"""
        model = model_zoo[name]
        state = state_for(model, seed=3)
        cache = compute_kinematics_cache(model, state.q, state.qd, state.qdd)
        assert_close(tau_from_cache(model, cache), rnea(model, state.q, state.qd, state.qdd), atol=1e-11)

    def test_gravity_override(self, serial_chain, state_for):
        """Test a gravity argument replaces the model gravity"""
        state = state_for(serial_chain)
        zero_g = serial_chain.with_gravity(np.zeros(6))
        assert_close(rnea(serial_chain, state.q, state.qd, state.qdd, gravity=ZERO_GRAVITY),
                     rnea(zero_g, state.q, state.qd, state.qdd), atol=1e-14)


@pytest.mark.unit
class TestKinematicsCache:
    """Test the forward-pass quantities"""

    def test_root_quantities(self, binary_tree, state_for):
        """Test the root sees zero parent velocity and base acceleration -a_g"""
        state = state_for(binary_tree)
        cache = compute_kinematics_cache(binary_tree, state.q, state.qd, np.zeros(binary_tree.n))
        assert_allclose(cache.Psid[0], 0.0)
        zero = compute_kinematics_cache(binary_tree, state.q)
        assert_allclose(zero.a[0], -binary_tree.gravity)

    def test_velocity_is_path_sum(self, mixed_chain, state_for):
        """Test v_i = sum of S_j qd_j over the support of i"""
        state = state_for(mixed_chain)
        cache = compute_kinematics_cache(mixed_chain, state.q, state.qd)
        last = mixed_chain.N - 1
        expected = sum(cache.S[j] @ state.qd[mixed_chain.dof_slice(j)] for j in mixed_chain.support(last))
        assert_close(cache.v[last], expected, atol=1e-14)

    def test_composites(self, binary_tree, state_for):
        """Test IC of the root is the sum of all ground inertias"""
        state = state_for(binary_tree)
        cache = compute_kinematics_cache(binary_tree, state.q, state.qd, state.qdd)
        assert_close(cache.IC[0], sum(cache.I), atol=1e-13)
        assert_close(cache.IC[1], cache.I[1] + cache.I[3] + cache.I[4], atol=1e-13)
        assert_close(cache.fC[2], cache.f[2] + cache.f[5] + cache.f[6], atol=1e-13)

    def test_unhalved_body_coriolis(self, serial_chain, state_for):
        """Test B_i v_i equals 2 (v x*) I v"""
        state = state_for(serial_chain)
        cache = compute_kinematics_cache(serial_chain, state.q, state.qd)
        from sorbd.utils.spatial_algebra import cross_force
        for i in range(serial_chain.N):
            v = cache.v[i]
            assert_close(cache.B[i] @ v, 2.0 * cross_force(v) @ cache.I[i] @ v, atol=1e-12)


@pytest.mark.unit
class TestMinvApply:
    """Test the two inverse mass-matrix strategies"""

    @pytest.mark.parametrize("name", ['double_pendulum', 'mixed_chain', 'floating_chain'])
    def test_strategies_agree(self, name, model_zoo, state_for, rng):
        """Test Cholesky and ABA-zero give M^-1 B"""
        model = model_zoo[name]
        state = state_for(model)
        B = rng.standard_normal((model.n, 3))
        expected = np.linalg.solve(crba(model, state.q), B)
        assert_close(minv_apply(model, state.q, B, 'cholesky'), expected, atol=1e-10)
        assert_close(minv_apply(model, state.q, B, 'aba'), expected, atol=1e-10)

    def test_vector_input(self, serial_chain, state_for):
        """Test an n-vector comes back as an n-vector"""
        state = state_for(serial_chain)
        out = minv_apply(serial_chain, state.q, np.ones(serial_chain.n))
        assert out.shape == (serial_chain.n,)

    def test_bad_arguments(self, serial_chain, state_for):
        """Test wrong row counts and unknown strategies"""
        state = state_for(serial_chain)
        with pytest.raises(ShapeMismatchError):
            minv_apply(serial_chain, state.q, np.ones(3))
        with pytest.raises(ValueError, match="Unknown minv strategy"):
            minv_apply(serial_chain, state.q, np.ones(serial_chain.n), 'lu')

    def test_factorization_failure(self):
        """Test indefinite or non-finite matrices are rejected"""
        with pytest.raises(FactorizationError):
            factorize_mass_matrix(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with pytest.raises(FactorizationError):
            factorize_mass_matrix(np.array([[np.nan]]))

    def test_singular_joint_inertia(self):
        """Test a singular articulated joint inertia is reported"""
        with pytest.raises(SingularInertiaError):
            _invert_joint_inertia(np.zeros((1, 1)), 0)


@pytest.mark.unit
class TestInputs:
    """Test input normalisation"""

    def test_flat_configuration_vector(self, serial_chain, state_for):
        """Test 1-DoF models accept a flat q vector"""
        state = state_for(serial_chain)
        flat = np.array(state.q)
        assert_allclose(rnea(serial_chain, flat, state.qd, state.qdd),
                        rnea(serial_chain, state.q, state.qd, state.qdd))

    def test_wrong_sizes(self, serial_chain, state_for):
        """Test configuration count and vector lengths are checked"""
        state = state_for(serial_chain)
        with pytest.raises(ShapeMismatchError):
            normalize_configs(serial_chain, state.q[:-1])
        with pytest.raises(ShapeMismatchError):
            rnea(serial_chain, state.q, np.zeros(2))
        with pytest.raises(ShapeMismatchError):
            rnea(serial_chain, state.q, gravity=np.zeros(3))
