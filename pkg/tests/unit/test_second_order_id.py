"""
Unit tests for second-order inverse dynamics derivatives
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sorbd.services.dynamics import ZERO_GRAVITY, compute_kinematics_cache, rnea
from sorbd.services.first_order import idsva_fo
from sorbd.services.oracles import bicomplex_bundle
from sorbd.services.second_order_id import (
    d2tau_cross_qdd, idsva_so, idsva_so_from_cache, so_symmetry_views, stack_id_so,
)
from sorbd.utils.tensor_algebra import transpose_R
from tests.helpers import assert_close


def assert_bundles_close(got, want, rtol=1e-9, atol=1e-9):
    for name in ('d2tau_dq2', 'd2tau_dqd2', 'd2tau_dq_dqd', 'dM_dq'):
        scale = max(1.0, float(np.max(np.abs(getattr(want, name)))))
        assert_allclose(getattr(got, name), getattr(want, name), rtol=rtol, atol=atol * scale, err_msg=name)


@pytest.mark.unit
class TestAgainstComplexStep:
    """Test idsva_so against the bi-complex oracle"""

    @pytest.mark.parametrize("name", ['pendulum', 'double_pendulum', 'serial_chain', 'binary_tree'])
    def test_single_dof_models(self, name, model_zoo, state_for):
        """Test all four tensors on revolute/prismatic trees"""
        model = model_zoo[name]
        state = state_for(model, seed=7)
        got = idsva_so(model, state.q, state.qd, state.qdd)
        assert_bundles_close(got, bicomplex_bundle(model, state, 'rnea'))

    @pytest.mark.parametrize("name", ['mixed_chain', 'floating_chain', 'mixed_tree'])
    def test_multi_dof_models(self, name, model_zoo, state_for):
        """Test Lie-derivative tensors of spherical and floating joints"""
        model = model_zoo[name]
        state = state_for(model, seed=8)
        got = idsva_so(model, state.q, state.qd, state.qdd)
        assert_bundles_close(got, bicomplex_bundle(model, state, 'rnea'))

    def test_from_cache(self, binary_tree, state_for):
        """Test the cache entry point gives the same bundle"""
        state = state_for(binary_tree)
        cache = compute_kinematics_cache(binary_tree, state.q, state.qd, state.qdd)
        a = idsva_so(binary_tree, state.q, state.qd, state.qdd)
        b = idsva_so_from_cache(binary_tree, cache)
        assert_allclose(a.d2tau_dq2, b.d2tau_dq2)
        assert_allclose(a.dM_dq, b.dM_dq)


@pytest.mark.unit
class TestStructure:
    """Test symmetries and invariances of the ID tensors"""

    def test_layout(self, mixed_chain, state_for):
        """Test n x n x n column-major tensors"""
        state = state_for(mixed_chain)
        bundle = idsva_so(mixed_chain, state.q, state.qd, state.qdd)
        assert bundle.n == 10
        for T in (bundle.d2tau_dq2, bundle.d2tau_dqd2, bundle.d2tau_dq_dqd, bundle.dM_dq):
            assert T.shape == (10, 10, 10)
            assert T.flags['F_CONTIGUOUS']

    def test_velocity_hessian_is_symmetric(self, mixed_tree, state_for):
        """Test d2tau/dqd2 is symmetric in column and page"""
        state = state_for(mixed_tree)
        bundle = idsva_so(mixed_tree, state.q, state.qd, state.qdd)
        assert_close(bundle.d2tau_dqd2, transpose_R(bundle.d2tau_dqd2), atol=1e-12)

    def test_configuration_hessian_symmetric_for_single_dof(self, serial_chain, state_for):
        """Test d2tau/dq2 is symmetric when every joint has one DoF"""
        state = state_for(serial_chain)
        bundle = idsva_so(serial_chain, state.q, state.qd, state.qdd)
        assert_close(bundle.d2tau_dq2, transpose_R(bundle.d2tau_dq2), atol=1e-11)

    def test_mass_matrix_slope(self, mixed_chain, state_for):
        """Test dM/dq pages are symmetric and independent of qd, qdd and gravity"""
        state = state_for(mixed_chain)
        bundle = idsva_so(mixed_chain, state.q, state.qd, state.qdd)
        dM = d2tau_cross_qdd(mixed_chain, state.q)
        assert_close(dM, np.transpose(dM, (1, 0, 2)), atol=1e-12)
        assert_close(bundle.dM_dq, dM, atol=1e-12)

    def test_velocity_hessian_ignores_acceleration(self, binary_tree, state_for):
        """Test d2tau/dqd2 does not depend on qdd or gravity"""
        state = state_for(binary_tree)
        a = idsva_so(binary_tree, state.q, state.qd, state.qdd)
        b = idsva_so(binary_tree, state.q, state.qd, np.zeros(binary_tree.n), gravity=ZERO_GRAVITY)
        assert_close(a.d2tau_dqd2, b.d2tau_dqd2, atol=1e-12)

    def test_zero_velocity(self, mixed_chain, state_for):
        """Test velocity tensors vanish at rest"""
        state = state_for(mixed_chain)
        bundle = idsva_so(mixed_chain, state.q, np.zeros(mixed_chain.n), state.qdd)
        assert_close(bundle.d2tau_dq_dqd, 0.0, atol=1e-13)
        assert np.any(bundle.d2tau_dqd2 != 0.0)


@pytest.mark.unit
class TestSymmetryViews:
    """Test the companion tensors and the stacked layout"""

    def test_views(self, serial_chain, state_for):
        """Test views are the R-transposes of the stored cross tensors"""
        state = state_for(serial_chain)
        bundle = idsva_so(serial_chain, state.q, state.qd, state.qdd)
        views = so_symmetry_views(bundle)
        assert set(views) == {'d2tau_dqd_dq', 'd2tau_dq_dqdd'}
        assert_allclose(views['d2tau_dqd_dq'], np.transpose(bundle.d2tau_dq_dqd, (0, 2, 1)))
        assert_allclose(views['d2tau_dq_dqdd'], np.transpose(bundle.dM_dq, (0, 2, 1)))

    def test_stacked_tensor(self, serial_chain, state_for):
        """Test the stacked tensor blocks and its column/page symmetry"""
        state = state_for(serial_chain)
        bundle = idsva_so(serial_chain, state.q, state.qd, state.qdd)
        n = serial_chain.n
        full = stack_id_so(bundle)
        assert full.shape == (n, 3 * n, 3 * n)
        assert not full[:, n:2 * n, 2 * n:].any()
        assert not full[:, 2 * n:, 2 * n:].any()
        assert_allclose(full[:, :n, :n], bundle.d2tau_dq2)
        assert_close(full, transpose_R(full), atol=1e-11)


def related(model, a: int, b: int) -> bool:
    return a in model.support(b) or b in model.support(a)


@pytest.mark.unit
class TestBranchSparsity:
    """Test entries coupling bodies on different branches are exactly zero"""

    @pytest.mark.parametrize("name", ['binary_tree', 'mixed_tree'])
    def test_unrelated_triples_are_zero(self, name, model_zoo, state_for):
        """Test (row, column, page) with any two bodies off each other's path"""
        model = model_zoo[name]
        state = state_for(model, seed=12)
        bundle = idsva_so(model, state.q, state.qd, state.qdd)
        body = model.dof_body
        mask = np.array([[[not (related(model, body[r], body[c]) and related(model, body[r], body[p])
                                and related(model, body[c], body[p]))
                           for p in range(model.n)] for c in range(model.n)] for r in range(model.n)])
        assert mask.any()
        for field in ('d2tau_dq2', 'd2tau_dqd2', 'd2tau_dq_dqd', 'dM_dq'):
            tensor = getattr(bundle, field)
            assert (tensor[mask] == 0.0).all(), field
            assert np.count_nonzero(tensor[~mask]) > 0, field


@pytest.mark.unit
class TestEnergyConsistency:
    """Test quadratic velocity identities tied to kinetic energy"""

    @pytest.mark.parametrize("name", ['serial_chain', 'binary_tree', 'mixed_chain', 'floating_chain', 'mixed_tree'])
    def test_power_balance(self, name, model_zoo, state_for):
        """Test qd^T C qd = qd^T Mdot qd / 2 with Mdot = sum_c dM/dq_c qd_c"""
        model = model_zoo[name]
        state = state_for(model, seed=13)
        qd = state.qd
        dM = idsva_so(model, state.q, state.qd, state.qdd).dM_dq
        velocity_torque = rnea(model, state.q, qd, np.zeros(model.n), gravity=ZERO_GRAVITY)
        power = float(qd @ velocity_torque)
        assert 0.5 * qd @ np.einsum('abc,c->ab', dM, qd) @ qd == pytest.approx(power, rel=1e-9, abs=1e-10)

    @pytest.mark.parametrize("name", ['serial_chain', 'mixed_tree'])
    def test_velocity_homogeneity(self, name, model_zoo, state_for):
        """Test Euler's relations for the degree-two velocity terms"""
        model = model_zoo[name]
        state = state_for(model, seed=14)
        qd = state.qd
        velocity_torque = rnea(model, state.q, qd, np.zeros(model.n), gravity=ZERO_GRAVITY)
        hessian = idsva_so(model, state.q, qd, state.qdd).d2tau_dqd2
        jacobian = idsva_fo(model, state.q, qd, state.qdd).dtau_dqd
        assert_close(np.einsum('iab,b->ia', hessian, qd), jacobian, atol=1e-11)
        assert_close(jacobian @ qd, 2.0 * velocity_torque, atol=1e-11)
