"""
Model Generators
Synthetic serial chains and binary trees for benchmarks and verification.

Link recipe: unit mass, box inertia with fixed nominal dimensions scaled by
a seeded multiplier in [0.5, 1.5], centre of mass half-way along the link,
and a joint placement offset along the parent's link with a small seeded
rotation so that joint axes are not all parallel.
"""

import logging
from typing import Sequence, Union

import numpy as np

from ..models.errors import ModelValidationError
from ..models.joint import JointKind, JointModel
from ..models.model import ROOT, Model
from ..models.spatial import SpatialInertia, SpatialTransform
from ..utils.lie_group import exp_so3

logger = logging.getLogger(__name__)

# Nominal link box dimensions (length, width, height) in m
LINK_DIMENSIONS = (0.3, 0.05, 0.05)

# Bound on each component of the seeded placement rotation vector, in rad
PLACEMENT_TILT = 0.5

KindSpec = Union[str, JointKind, JointModel, Sequence[Union[str, JointKind, JointModel]]]


def _kind_sequence(kinds: KindSpec, N: int, floating_base: bool):
    if isinstance(kinds, (str, JointKind, JointModel)):
        kinds = [kinds]
    kinds = [k if isinstance(k, JointModel) else JointModel(k) for k in kinds]
    if not kinds:
        raise ModelValidationError("at least one joint kind is required")
    joints = [kinds[i % len(kinds)] for i in range(N)]
    if floating_base:
        joints = [JointModel(JointKind.FLOATING)] + [kinds[i % len(kinds)] for i in range(N - 1)]
    return joints


def _link(rng: np.random.Generator):
    """Seeded (inertia, placement) pair of one link"""
    scale = rng.uniform(0.5, 1.5)
    a, b, c = (d * scale for d in LINK_DIMENSIONS)
    mass = 1.0
    inertia_com = mass / 12.0 * np.diag([b * b + c * c, a * a + c * c, a * a + b * b])
    inertia = SpatialInertia.from_mass_com_inertia(mass, (0.5 * a, 0.0, 0.0), inertia_com)
    rotation = exp_so3(rng.uniform(-PLACEMENT_TILT, PLACEMENT_TILT, 3))
    placement = SpatialTransform(rotation, np.array([a, 0.0, 0.0]))
    return inertia, placement


def _build(parents, kinds: KindSpec, floating_base: bool, seed: int, prefix: str) -> Model:
    N = len(parents)
    if N < 1:
        raise ModelValidationError("model must contain at least one body")
    rng = np.random.default_rng(seed)
    joints = _kind_sequence(kinds, N, floating_base)
    inertias, placements = [], []
    for i in range(N):
        inertia, placement = _link(rng)
        inertias.append(inertia)
        placements.append(SpatialTransform.identity() if parents[i] == ROOT else placement)
    names = [f"{prefix}{i + 1}" for i in range(N)]
    model = Model(tuple(parents), tuple(joints), tuple(inertias), tuple(placements), names=tuple(names))
    logger.debug(f"Generated {prefix} model: N={model.N}, n={model.n}, depth={model.depth}")
    return model


def make_serial_chain(N: int, kinds: KindSpec = JointKind.REVOLUTE_Z, floating_base: bool = False,
                      seed: int = 0) -> Model:
    """
    Serial chain with parent(i) = i - 1.

    Args:
        N: Number of bodies (>= 1)
        kinds: Joint kind, or a sequence of kinds cycled over the bodies
        floating_base: Make body 1's joint floating
        seed: Seed of the link parameter recipe

    Raises:
        ModelValidationError: If N < 1
    """
    return _build([i - 1 for i in range(N)], kinds, floating_base, seed, "link")


def make_binary_tree(N: int, kinds: KindSpec = JointKind.REVOLUTE_Z, floating_base: bool = False,
                     seed: int = 0) -> Model:
    """
    Complete binary tree: in 1-based numbering parent(i) = floor(i / 2).

    Raises:
        ModelValidationError: If N < 1
    """
    return _build([(i - 1) // 2 if i else ROOT for i in range(N)], kinds, floating_base, seed, "node")
