"""
Pytest configuration and shared fixtures
"""

from dotenv import load_dotenv

# Load environment variables from .env file before anything else
load_dotenv()

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from sorbd.models.joint import JointKind
from sorbd.services.generators import make_binary_tree, make_serial_chain
from sorbd.services.joints import random_state


FIXTURES_DIR = Path(__file__).parent / "fixtures"

# Joint kinds cycled over the bodies of the mixed-joint chain
MIXED_KINDS = (
    JointKind.REVOLUTE_X,
    JointKind.SPHERICAL,
    JointKind.PRISMATIC_Y,
    JointKind.REVOLUTE_Z,
    JointKind.SPHERICAL,
    JointKind.REVOLUTE_Y,
)


@pytest.fixture
def rng():
    """Seeded generator; every test starts from the same stream"""
    return np.random.default_rng(20240607)


@pytest.fixture
def pendulum():
    """Single revolute-z link hanging from the root"""
    return make_serial_chain(1, JointKind.REVOLUTE_Z, seed=1)


@pytest.fixture
def double_pendulum():
    """Two revolute links with tilted axes"""
    return make_serial_chain(2, [JointKind.REVOLUTE_X, JointKind.REVOLUTE_Y], seed=2)


@pytest.fixture
def serial_chain():
    """Five-link revolute chain"""
    return make_serial_chain(5, [JointKind.REVOLUTE_Z, JointKind.REVOLUTE_X, JointKind.PRISMATIC_Z], seed=3)


@pytest.fixture
def binary_tree():
    """Seven-body complete binary tree"""
    return make_binary_tree(7, [JointKind.REVOLUTE_Y, JointKind.REVOLUTE_Z], seed=4)


@pytest.fixture
def mixed_chain():
    """Six-link chain with revolute, prismatic and spherical joints (n = 10)"""
    return make_serial_chain(6, MIXED_KINDS, seed=5)


@pytest.fixture
def floating_chain():
    """Floating base followed by three revolute links (n = 9)"""
    return make_serial_chain(4, [JointKind.REVOLUTE_X, JointKind.REVOLUTE_Y], floating_base=True, seed=6)


@pytest.fixture
def mixed_tree():
    """Five-body binary tree with a spherical root joint"""
    return make_binary_tree(5, [JointKind.SPHERICAL, JointKind.REVOLUTE_X, JointKind.PRISMATIC_X], seed=7)


@pytest.fixture
def model_zoo(pendulum, double_pendulum, serial_chain, binary_tree, mixed_chain, floating_chain, mixed_tree):
    """All fixture models, keyed by name"""
    return {
        'pendulum': pendulum,
        'double_pendulum': double_pendulum,
        'serial_chain': serial_chain,
        'binary_tree': binary_tree,
        'mixed_chain': mixed_chain,
        'floating_chain': floating_chain,
        'mixed_tree': mixed_tree,
    }


@pytest.fixture
def state_for():
    """Factory: deterministic random State of a model for a seed"""
    def _make(model, seed=0):
        return random_state(model, np.random.default_rng(seed))
    return _make


@pytest.fixture
def quadruped_path():
    """Floating-base quadruped model file (13 bodies, n = 18)"""
    return FIXTURES_DIR / "quadruped.sorbd"
