"""
Unit tests for synthetic model generators
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sorbd.models.errors import ModelValidationError
from sorbd.models.joint import JointKind
from sorbd.services.generators import LINK_DIMENSIONS, make_binary_tree, make_serial_chain


@pytest.mark.unit
class TestSerialChain:
    """Test serial chain generation"""

    def test_topology(self):
        """Test parent(i) = i - 1 and default names"""
        model = make_serial_chain(4)
        assert model.parents == (-1, 0, 1, 2)
        assert model.names == ('link1', 'link2', 'link3', 'link4')
        assert all(j.kind == JointKind.REVOLUTE_Z for j in model.joints)

    def test_kinds_are_cycled(self):
        """Test a kind sequence repeats over the bodies"""
        model = make_serial_chain(5, ['revolute-x', 'prismatic-y'])
        assert [j.kind.value for j in model.joints] == [
            'revolute-x', 'prismatic-y', 'revolute-x', 'prismatic-y', 'revolute-x']

    def test_floating_base(self):
        """Test body 1 becomes floating and the rest keep the cycle"""
        model = make_serial_chain(3, JointKind.REVOLUTE_Y, floating_base=True)
        assert model.joints[0].kind == JointKind.FLOATING
        assert model.n == 8

    def test_seeded_recipe(self):
        """Test equal seeds reproduce link parameters and different seeds change them"""
        a, b, c = make_serial_chain(3, seed=7), make_serial_chain(3, seed=7), make_serial_chain(3, seed=8)
        for i in range(3):
            assert_allclose(a.inertia_matrices[i], b.inertia_matrices[i])
            assert_allclose(a.placements[i].rotation, b.placements[i].rotation)
        assert not np.allclose(a.inertia_matrices[1], c.inertia_matrices[1])

    def test_link_recipe(self):
        """Test unit mass, the root placement and link-length offsets"""
        model = make_serial_chain(3, seed=1)
        assert all(I.mass == 1.0 for I in model.inertias)
        assert_allclose(model.placements[0].rotation, np.eye(3))
        assert_allclose(model.placements[0].translation, np.zeros(3))
        length = model.placements[1].translation[0]
        assert 0.5 * LINK_DIMENSIONS[0] <= length <= 1.5 * LINK_DIMENSIONS[0]
        assert not np.allclose(model.placements[1].rotation, np.eye(3))

    def test_invalid_size(self):
        """Test N < 1 is rejected"""
        with pytest.raises(ModelValidationError):
            make_serial_chain(0)


@pytest.mark.unit
class TestBinaryTree:
    """Test complete binary tree generation"""

    def test_topology(self):
        """Test parent(i) = floor(i / 2) in 1-based numbering"""
        model = make_binary_tree(7)
        assert model.parent_array == [0, 1, 1, 2, 2, 3, 3]
        assert model.names[0] == 'node1'
        assert model.depth == 3

    def test_single_body(self):
        """Test a one-body tree"""
        assert make_binary_tree(1).parents == (-1,)

    def test_invalid_size(self):
        """Test N < 1 is rejected"""
        with pytest.raises(ModelValidationError):
            make_binary_tree(0)
