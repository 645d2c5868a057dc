"""
Kinematic Tree Models
Model (bodies, joints, inertias, placements, gravity) and State containers
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ModelValidationError, ShapeMismatchError
from .joint import JointModel
from .spatial import SpatialInertia, SpatialTransform

# Default gravity a_g as a spatial acceleration (angular first)
DEFAULT_GRAVITY = (0.0, 0.0, 0.0, 0.0, 0.0, -9.81)

# Index used for the root in the 0-based parent tuple
ROOT = -1


@dataclass(frozen=True, eq=False)
class Model:
    """
    Immutable kinematic tree.

    Bodies are numbered 0..N-1 in topological order. parents[i] is the
    0-based parent body or -1 for the root, and parents[i] < i. Body i hangs
    from its parent through placements[i] followed by joints[i]; inertias[i]
    is expressed in the body frame.
    """
    parents: Tuple[int, ...]
    joints: Tuple[JointModel, ...]
    inertias: Tuple[SpatialInertia, ...]
    placements: Tuple[SpatialTransform, ...]
    gravity: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_GRAVITY))
    names: Tuple[str, ...] = ()

    # Derived connectivity, filled in __post_init__
    dof_offsets: Tuple[int, ...] = field(init=False, repr=False)
    children: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False)
    dof_body: Tuple[int, ...] = field(init=False, repr=False)
    inertia_matrices: Tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        parents = tuple(int(p) for p in self.parents)
        joints = tuple(j if isinstance(j, JointModel) else JointModel(j) for j in self.joints)
        inertias = tuple(self.inertias)
        placements = tuple(self.placements) if self.placements else tuple(
            SpatialTransform.identity() for _ in parents)
        N = len(parents)
        if N == 0:
            raise ModelValidationError("model must contain at least one body")
        for label, seq in (('joints', joints), ('inertias', inertias), ('placements', placements)):
            if len(seq) != N:
                raise ModelValidationError(f"expected {N} {label}, got {len(seq)}")
        for i, p in enumerate(parents):
            if not ROOT <= p < i:
                raise ModelValidationError(
                    f"parent of body {i} must be the root or a lower-numbered body, got {p}")
        gravity = np.array(self.gravity, dtype=float)
        if gravity.shape != (6,):
            raise ShapeMismatchError(f"gravity must be a spatial 6-vector, got shape {gravity.shape}")
        gravity.setflags(write=False)
        names = tuple(self.names) if self.names else tuple(f"body{i + 1}" for i in range(N))
        if len(names) != N:
            raise ModelValidationError(f"expected {N} names, got {len(names)}")

        offsets, dof_body, offset = [], [], 0
        for i, joint in enumerate(joints):
            offsets.append(offset)
            dof_body.extend([i] * joint.dof)
            offset += joint.dof
        children = [[] for _ in range(N)]
        for i, p in enumerate(parents):
            if p != ROOT:
                children[p].append(i)

        object.__setattr__(self, 'parents', parents)
        object.__setattr__(self, 'joints', joints)
        object.__setattr__(self, 'inertias', inertias)
        object.__setattr__(self, 'placements', placements)
        object.__setattr__(self, 'gravity', gravity)
        object.__setattr__(self, 'names', names)
        object.__setattr__(self, 'dof_offsets', tuple(offsets))
        object.__setattr__(self, 'dof_body', tuple(dof_body))
        object.__setattr__(self, 'children', tuple(tuple(c) for c in children))
        object.__setattr__(self, 'inertia_matrices', tuple(I.to_matrix() for I in inertias))

    # -- sizes ---------------------------------------------------------------

    @property
    def N(self) -> int:
        """Number of bodies/joints"""
        return len(self.parents)

    @property
    def n(self) -> int:
        """Total degrees of freedom"""
        return len(self.dof_body)

    @property
    def parent_array(self) -> List[int]:
        """Parent array lambda(i) in 1-based numbering with 0 = root"""
        return [p + 1 for p in self.parents]

    @property
    def dofs(self) -> List[int]:
        return [joint.dof for joint in self.joints]

    def dof_slice(self, i: int) -> slice:
        start = self.dof_offsets[i]
        return slice(start, start + self.joints[i].dof)

    @property
    def has_multi_dof(self) -> bool:
        return any(joint.is_multi_dof for joint in self.joints)

    # -- connectivity --------------------------------------------------------

    def ancestors(self, i: int) -> List[int]:
        """Strict ancestors of body i, nearest first"""
        chain = []
        p = self.parents[i]
        while p != ROOT:
            chain.append(p)
            p = self.parents[p]
        return chain

    def support(self, i: int) -> List[int]:
        """Body i followed by its ancestors (j with j <= i in tree order)"""
        return [i] + self.ancestors(i)

    def subtree(self, i: int) -> List[int]:
        """nu(i): body i and all its descendants, ascending"""
        members = [i]
        for k in range(i + 1, self.N):
            if self.parents[k] in members:
                members.append(k)
        return members

    def is_ancestor_or_self(self, j: int, i: int) -> bool:
        """True when j lies on the path from body i to the root"""
        while i != ROOT:
            if i == j:
                return True
            i = self.parents[i]
        return False

    @property
    def depth(self) -> int:
        """Tree depth d: the largest number of bodies on a root-to-leaf path"""
        levels = []
        for p in self.parents:
            levels.append(1 if p == ROOT else levels[p] + 1)
        return max(levels)

    def with_gravity(self, gravity: Sequence[float]) -> "Model":
        """Copy of the model with a different gravity vector"""
        return Model(self.parents, self.joints, self.inertias, self.placements,
                     gravity=np.array(gravity, dtype=float), names=self.names)


@dataclass
class State:
    """
    Joint-space state of a model.

    q holds one configuration per joint (float, 3x3 rotation or 4x4
    transform); qd, qdd and tau are flat n-vectors.
    """
    q: List
    qd: np.ndarray
    qdd: np.ndarray
    tau: Optional[np.ndarray] = None

    def validate(self, model: Model) -> None:
        """Check sizes against the model"""
        if len(self.q) != model.N:
            raise ShapeMismatchError(f"expected {model.N} joint configurations, got {len(self.q)}")
        for name in ('qd', 'qdd', 'tau'):
            value = getattr(self, name)
            if value is not None and np.shape(value) != (model.n,):
                raise ShapeMismatchError(f"{name} must have shape ({model.n},), got {np.shape(value)}")
