"""
Spatial Value Models
Immutable motion/force vectors, spatial transforms and spatial inertias
"""

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np

from .errors import InvalidRotationError, NonPhysicalInertiaError, ShapeMismatchError, SpatialKindError

# Orthonormality and det(R) tolerance for SpatialTransform
ROTATION_TOLERANCE = 1e-12


def _vector3(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.shape != (3,):
        raise ShapeMismatchError(f"{name} must have shape (3,), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class _SpatialVector:
    """Shared behaviour of motion and force vectors"""
    angular: np.ndarray
    linear: np.ndarray
    kind: ClassVar[str] = ''

    def __post_init__(self):
        object.__setattr__(self, 'angular', _vector3(self.angular, 'angular'))
        object.__setattr__(self, 'linear', _vector3(self.linear, 'linear'))

    @classmethod
    def from_array(cls, values):
        values = np.asarray(values, dtype=float)
        if values.shape != (6,):
            raise ShapeMismatchError(f"spatial vector must have shape (6,), got {values.shape}")
        return cls(values[:3], values[3:])

    @classmethod
    def zero(cls):
        return cls(np.zeros(3), np.zeros(3))

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.angular, self.linear])

    def _check_kind(self, other):
        if type(other) is not type(self):
            raise SpatialKindError(
                f"cannot combine a {self.kind} vector with {getattr(other, 'kind', type(other).__name__)}"
            )

    def __add__(self, other):
        self._check_kind(other)
        return type(self)(self.angular + other.angular, self.linear + other.linear)

    def __sub__(self, other):
        self._check_kind(other)
        return type(self)(self.angular - other.angular, self.linear - other.linear)

    def __neg__(self):
        return type(self)(-self.angular, -self.linear)

    def __mul__(self, scalar: float):
        return type(self)(self.angular * scalar, self.linear * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (type(other) is type(self)
                and np.array_equal(self.angular, other.angular)
                and np.array_equal(self.linear, other.linear))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class MotionVector(_SpatialVector):
    """Spatial motion vector (velocity, acceleration, joint axis)"""
    kind: ClassVar[str] = 'motion'

    def dot(self, f: "ForceVector") -> float:
        """Power product f^T v"""
        if not isinstance(f, ForceVector):
            raise SpatialKindError("a motion vector pairs with a force vector")
        return float(self.to_array() @ f.to_array())


@dataclass(frozen=True, eq=False)
class ForceVector(_SpatialVector):
    """Spatial force vector (moment first, then linear force)"""
    kind: ClassVar[str] = 'force'

    def dot(self, v: MotionVector) -> float:
        """Power product f^T v"""
        if not isinstance(v, MotionVector):
            raise SpatialKindError("a force vector pairs with a motion vector")
        return float(self.to_array() @ v.to_array())


@dataclass(frozen=True)
class SpatialTransform:
    """
    Rigid transform (R, p) from a child frame to its parent frame.

    R maps child-frame vectors into the parent frame and p is the child
    origin expressed in the parent frame.
    """
    rotation: np.ndarray
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        R = np.array(self.rotation, dtype=float)
        if R.shape != (3, 3):
            raise ShapeMismatchError(f"rotation must be 3x3, got {R.shape}")
        if np.max(np.abs(R.T @ R - np.eye(3))) > ROTATION_TOLERANCE:
            raise InvalidRotationError("rotation is not orthonormal")
        if abs(np.linalg.det(R) - 1.0) > ROTATION_TOLERANCE:
            raise InvalidRotationError("rotation determinant is not +1")
        R.setflags(write=False)
        object.__setattr__(self, 'rotation', R)
        object.__setattr__(self, 'translation', _vector3(self.translation, 'translation'))

    @classmethod
    def identity(cls) -> "SpatialTransform":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_homogeneous(cls, T) -> "SpatialTransform":
        T = np.asarray(T, dtype=float)
        if T.shape != (4, 4):
            raise ShapeMismatchError(f"homogeneous transform must be 4x4, got {T.shape}")
        return cls(T[:3, :3], T[:3, 3])

    def to_homogeneous(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.rotation
        T[:3, 3] = self.translation
        return T

    def compose(self, other: "SpatialTransform") -> "SpatialTransform":
        """self * other: first apply other, then self"""
        return SpatialTransform(self.rotation @ other.rotation,
                                self.translation + self.rotation @ other.translation)

    def inverse(self) -> "SpatialTransform":
        Rt = self.rotation.T
        return SpatialTransform(Rt, -Rt @ self.translation)

    def __matmul__(self, other: "SpatialTransform") -> "SpatialTransform":
        return self.compose(other)


@dataclass(frozen=True)
class SpatialInertia:
    """
    Rigid-body spatial inertia in compact form, about the frame origin.

    Attributes:
        mass: Body mass (kg)
        first_moment: h = mass * com (kg m)
        rotational_inertia: 3x3 inertia about the frame origin (kg m^2)
    """
    mass: float
    first_moment: np.ndarray
    rotational_inertia: np.ndarray

    def __post_init__(self):
        mass = float(self.mass)
        if not mass > 0:
            raise NonPhysicalInertiaError(f"mass must be positive, got {mass}")
        Io = np.array(self.rotational_inertia, dtype=float)
        if Io.shape != (3, 3):
            raise ShapeMismatchError(f"rotational inertia must be 3x3, got {Io.shape}")
        scale = max(1.0, np.max(np.abs(Io)))
        if np.max(np.abs(Io - Io.T)) > 1e-12 * scale:
            raise NonPhysicalInertiaError("rotational inertia is not symmetric")
        Io = 0.5 * (Io + Io.T)
        try:
            np.linalg.cholesky(Io)
        except np.linalg.LinAlgError:
            raise NonPhysicalInertiaError("rotational inertia is not positive definite")
        Io.setflags(write=False)
        object.__setattr__(self, 'mass', mass)
        object.__setattr__(self, 'first_moment', _vector3(self.first_moment, 'first_moment'))
        object.__setattr__(self, 'rotational_inertia', Io)

    @classmethod
    def from_mass_com_inertia(cls, mass: float, com, inertia_com) -> "SpatialInertia":
        """
        Build from mass, centre of mass and the rotational inertia about the
        centre of mass, shifting the latter to the frame origin.
        """
        c = np.asarray(com, dtype=float)
        Ic = np.asarray(inertia_com, dtype=float)
        Io = Ic + mass * (np.dot(c, c) * np.eye(3) - np.outer(c, c))
        return cls(mass, mass * c, Io)

    @classmethod
    def from_matrix(cls, M) -> "SpatialInertia":
        """Inverse of to_matrix(); the input is symmetrised first"""
        M = np.asarray(M, dtype=float)
        if M.shape != (6, 6):
            raise ShapeMismatchError(f"spatial inertia must be 6x6, got {M.shape}")
        M = 0.5 * (M + M.T)
        mass = M[3, 3]
        H = M[:3, 3:]
        h = np.array([H[2, 1], H[0, 2], H[1, 0]])
        return cls(mass, h, M[:3, :3])

    @property
    def com(self) -> np.ndarray:
        return self.first_moment / self.mass

    def to_matrix(self) -> np.ndarray:
        """Assemble [[Io, h x], [-(h x), m 1]]"""
        h = self.first_moment
        H = np.array([[0.0, -h[2], h[1]],
                      [h[2], 0.0, -h[0]],
                      [-h[1], h[0], 0.0]])
        out = np.empty((6, 6))
        out[:3, :3] = self.rotational_inertia
        out[:3, 3:] = H
        out[3:, :3] = -H
        out[3:, 3:] = self.mass * np.eye(3)
        return out

    def __add__(self, other: "SpatialInertia") -> "SpatialInertia":
        return SpatialInertia(self.mass + other.mass,
                              self.first_moment + other.first_moment,
                              self.rotational_inertia + other.rotational_inertia)
