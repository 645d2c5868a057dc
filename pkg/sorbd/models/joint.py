"""
Joint Models
Joint kinds, motion subspaces and se(3) generators
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np


class JointKind(str, Enum):
    """Supported joint types; the value is the model-file spelling"""
    REVOLUTE_X = "revolute-x"
    REVOLUTE_Y = "revolute-y"
    REVOLUTE_Z = "revolute-z"
    PRISMATIC_X = "prismatic-x"
    PRISMATIC_Y = "prismatic-y"
    PRISMATIC_Z = "prismatic-z"
    SPHERICAL = "spherical"
    FLOATING = "floating"


JOINT_KINDS = [kind.value for kind in JointKind]

_AXIS_INDEX = {'x': 0, 'y': 1, 'z': 2}


def _local_subspace(kind: JointKind) -> np.ndarray:
    if kind == JointKind.SPHERICAL:
        return np.vstack([np.eye(3), np.zeros((3, 3))])
    if kind == JointKind.FLOATING:
        return np.eye(6)
    family, axis = kind.value.split('-')
    S = np.zeros((6, 1))
    offset = 0 if family == 'revolute' else 3
    S[offset + _AXIS_INDEX[axis], 0] = 1.0
    return S


@dataclass(frozen=True)
class JointModel:
    """
    A joint with its local motion subspace iS_i (6 x n_i, constant).

    Configurations: a float for 1-DoF joints, a 3x3 rotation for spherical
    joints and a 4x4 homogeneous transform for floating joints. Spherical
    velocities are the relative angular velocity and floating velocities the
    relative spatial velocity, both in the child frame.
    """
    kind: JointKind

    def __post_init__(self):
        try:
            kind = JointKind(self.kind)
        except ValueError:
            raise ValueError(f"unknown joint kind: {self.kind!r} (expected one of {', '.join(JOINT_KINDS)})")
        object.__setattr__(self, 'kind', kind)
        S = _local_subspace(kind)
        S.setflags(write=False)
        object.__setattr__(self, '_subspace', S)

    @property
    def dof(self) -> int:
        return self._subspace.shape[1]

    @property
    def motion_subspace(self) -> np.ndarray:
        """Local-frame motion subspace iS_i"""
        return self._subspace

    @property
    def generators(self) -> List[np.ndarray]:
        """se(3) generators E_j = hat(s_j), one per DoF"""
        from ..utils.spatial_algebra import hat
        return [hat(self._subspace[:, j]).astype(float) for j in range(self.dof)]

    @property
    def is_multi_dof(self) -> bool:
        return self.kind in (JointKind.SPHERICAL, JointKind.FLOATING)

    @property
    def is_revolute(self) -> bool:
        return self.kind.value.startswith('revolute')

    @property
    def is_prismatic(self) -> bool:
        return self.kind.value.startswith('prismatic')

    def __str__(self) -> str:
        return self.kind.value
