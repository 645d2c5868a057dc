"""
Unit tests for first-order inverse and forward dynamics derivatives
"""

from unittest.mock import patch

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sorbd.models.errors import ContractViolationError, ShapeMismatchError
from sorbd.services import first_order
from sorbd.services.dynamics import ZERO_GRAVITY, aba, crba
from sorbd.services.first_order import fd_fo, idfoza, idfoza_columns, idsva_fo
from sorbd.services.oracles import bicomplex_fo
from sorbd.services.second_order_id import d2tau_cross_qdd
from tests.helpers import assert_close


@pytest.mark.unit
class TestInverseDynamicsJacobians:
    """Test idsva_fo against the bi-complex oracle"""

    @pytest.mark.parametrize("name", ['double_pendulum', 'serial_chain', 'binary_tree', 'mixed_chain',
                                      'floating_chain', 'mixed_tree'])
    def test_matches_complex_step(self, name, model_zoo, state_for):
        """Test dtau/dq and dtau/dqd to near machine precision"""
        model = model_zoo[name]
        state = state_for(model, seed=4)
        bundle = idsva_fo(model, state.q, state.qd, state.qdd)
        assert_close(bundle.dtau_dq, bicomplex_fo(model, state, 'rnea', 'q'), rtol=1e-9, atol=1e-10)
        assert_close(bundle.dtau_dqd, bicomplex_fo(model, state, 'rnea', 'qd'), rtol=1e-9, atol=1e-10)

    def test_dqdd_is_mass_matrix(self, mixed_chain, state_for):
        """Test dtau/dqdd = M(q)"""
        state = state_for(mixed_chain)
        bundle = idsva_fo(mixed_chain, state.q, state.qd, state.qdd)
        assert_close(bundle.M, crba(mixed_chain, state.q), atol=1e-13)
        assert bundle.qdd is not None

    def test_pendulum_gravity_free(self, pendulum):
        """Test a vertical-axis pendulum has no configuration dependence"""
        bundle = idsva_fo(pendulum, [0.4], [1.5], [0.2])
        assert bundle.dtau_dq[0, 0] == pytest.approx(0.0, abs=1e-14)
        assert bundle.dtau_dqd[0, 0] == pytest.approx(0.0, abs=1e-14)


@pytest.mark.unit
class TestIdfoza:
    """Test the dM/dq contraction by a zero-velocity first-order pass"""

    @pytest.mark.parametrize("name", ['serial_chain', 'mixed_chain'])
    def test_contraction(self, name, model_zoo, state_for, rng):
        """Test result[a, c] = sum_b dM_ab/dq_c b_b"""
        model = model_zoo[name]
        state = state_for(model)
        b = rng.standard_normal(model.n)
        dM = d2tau_cross_qdd(model, state.q)
        assert_close(idfoza(model, state.q, b), np.einsum('abc,b->ac', dM, b), atol=1e-11)

    @pytest.mark.parametrize("name", ['binary_tree', 'floating_chain', 'mixed_tree'])
    def test_matches_zero_velocity_pass(self, name, model_zoo, state_for, rng):
        """Test agreement with idsva_fo at zero velocity, zero gravity and qdd = b"""
        model = model_zoo[name]
        q = state_for(model).q
        b = rng.standard_normal(model.n)
        expected = idsva_fo(model, q, np.zeros(model.n), b, gravity=ZERO_GRAVITY).dtau_dq
        assert_close(idfoza(model, q, b), expected, atol=1e-12)

    def test_columns(self, mixed_tree, state_for, rng):
        """Test every column of B is contracted after one configuration pass"""
        q = state_for(mixed_tree).q
        B = rng.standard_normal((mixed_tree.n, 3))
        with patch.object(first_order, 'forward_poses', wraps=first_order.forward_poses) as poses:
            result = idfoza_columns(mixed_tree, q, B)
        assert poses.call_count == 1
        assert result.shape == (mixed_tree.n, 3, mixed_tree.n)
        for a in range(3):
            assert_close(result[:, a, :], idfoza(mixed_tree, q, B[:, a]), atol=1e-13)

    def test_shape(self, serial_chain, state_for):
        """Test b must be an n-vector"""
        with pytest.raises(ShapeMismatchError):
            idfoza(serial_chain, state_for(serial_chain).q, np.ones(2))


@pytest.mark.unit
class TestForwardDynamicsJacobians:
    """Test fd_fo"""

    @pytest.mark.parametrize("name", ['double_pendulum', 'binary_tree', 'mixed_chain', 'floating_chain'])
    def test_matches_complex_step(self, name, model_zoo, state_for):
        """Test dFD/dq, dFD/dqd and dFD/dtau against bi-complex steps through ABA"""
        model = model_zoo[name]
        state = state_for(model, seed=5)
        bundle = fd_fo(model, state.q, state.qd, state.tau)
        assert_close(bundle.dfd_dq, bicomplex_fo(model, state, 'aba', 'q'), rtol=1e-8, atol=1e-9)
        assert_close(bundle.dfd_dqd, bicomplex_fo(model, state, 'aba', 'qd'), rtol=1e-8, atol=1e-9)
        assert_close(bundle.dfd_dtau, bicomplex_fo(model, state, 'aba', 'tau'), rtol=1e-8, atol=1e-9)

    def test_inverse_mass_matrix(self, serial_chain, state_for):
        """Test M_inv is symmetric and inverts M"""
        state = state_for(serial_chain)
        bundle = fd_fo(serial_chain, state.q, state.qd, state.tau)
        assert_close(bundle.M_inv, bundle.M_inv.T, atol=0)
        assert_close(bundle.M_inv @ bundle.M, np.eye(serial_chain.n), atol=1e-10)
        assert_close(bundle.qdd, aba(serial_chain, state.q, state.qd, state.tau), atol=1e-12)

    def test_given_acceleration_is_reused(self, serial_chain, state_for):
        """Test a supplied consistent qdd gives the same bundle"""
        state = state_for(serial_chain)
        qdd = aba(serial_chain, state.q, state.qd, state.tau)
        a = fd_fo(serial_chain, state.q, state.qd, state.tau)
        b = fd_fo(serial_chain, state.q, state.qd, state.tau, qdd=qdd)
        assert_close(a.dfd_dq, b.dfd_dq, atol=1e-14)

    def test_debug_check_rejects_inconsistent_qdd(self, serial_chain, state_for, monkeypatch):
        """Test debug checks catch a qdd that does not solve for tau"""
        monkeypatch.setattr(first_order.settings, 'debug_checks', True)
        state = state_for(serial_chain)
        wrong = aba(serial_chain, state.q, state.qd, state.tau) + 1.0
        with pytest.raises(ContractViolationError):
            fd_fo(serial_chain, state.q, state.qd, state.tau, qdd=wrong)

    def test_debug_check_off_by_default(self, serial_chain, state_for):
        """Test an inconsistent qdd passes through when checks are disabled"""
        state = state_for(serial_chain)
        wrong = aba(serial_chain, state.q, state.qd, state.tau) + 1.0
        bundle = fd_fo(serial_chain, state.q, state.qd, state.tau, qdd=wrong)
        assert_allclose(bundle.qdd, wrong)
