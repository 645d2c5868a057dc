"""
Spatial vector algebra

Cross-product operators, body-Coriolis matrices, coordinate transforms and
the se(3) hat/vee maps. Spatial vectors are ordered angular part first,
linear part second.

The array-level helpers accept plain 6-vectors as well as the typed
MotionVector/ForceVector values, and are generic over the scalar type:
float arrays stay float, object arrays of BiComplex stay object arrays.
"""

from typing import Union

import numpy as np

from ..models.errors import MalformedLieAlgebraError, ShapeMismatchError, SpatialKindError
from ..models.spatial import ForceVector, MotionVector, SpatialInertia, SpatialTransform

# Tolerance used by vee() when checking the se(3) pattern
VEE_TOLERANCE = 1e-10


def _as_motion(v) -> np.ndarray:
    if isinstance(v, ForceVector):
        raise SpatialKindError("expected a motion vector, got a force vector")
    if isinstance(v, MotionVector):
        return v.to_array()
    v = np.asarray(v)
    if v.shape != (6,):
        raise ShapeMismatchError(f"spatial vector must have shape (6,), got {v.shape}")
    return v


def _as_force(f) -> np.ndarray:
    if isinstance(f, MotionVector):
        raise SpatialKindError("expected a force vector, got a motion vector")
    if isinstance(f, ForceVector):
        return f.to_array()
    f = np.asarray(f)
    if f.shape != (6,):
        raise ShapeMismatchError(f"spatial vector must have shape (6,), got {f.shape}")
    return f


def skew(w) -> np.ndarray:
    """3x3 matrix with skew(w) @ x = w x x"""
    return np.array([[0, -w[2], w[1]],
                     [w[2], 0, -w[0]],
                     [-w[1], w[0], 0]])


def unskew(m) -> np.ndarray:
    """Inverse of skew() for an exactly skew-symmetric matrix"""
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def cross_motion(v) -> np.ndarray:
    """
    Spatial cross product for motion vectors, (v x).

    Returns [[w x, 0], [vl x, w x]] so that cross_motion(v) @ u is the rate
    of change of the motion vector u under motion v.
    """
    v = _as_motion(v)
    return np.array([0, -v[2], v[1], 0, 0, 0,
                     v[2], 0, -v[0], 0, 0, 0,
                     -v[1], v[0], 0, 0, 0, 0,
                     0, -v[5], v[4], 0, -v[2], v[1],
                     v[5], 0, -v[3], v[2], 0, -v[0],
                     -v[4], v[3], 0, -v[1], v[0], 0]).reshape(6, 6)


def cross_force(v) -> np.ndarray:
    """Spatial cross product for force vectors, (v x*) = -(v x)^T"""
    v = _as_motion(v)
    return np.array([0, -v[2], v[1], 0, -v[5], v[4],
                     v[2], 0, -v[0], v[5], 0, -v[3],
                     -v[1], v[0], 0, -v[4], v[3], 0,
                     0, 0, 0, 0, -v[2], v[1],
                     0, 0, 0, v[2], 0, -v[0],
                     0, 0, 0, -v[1], v[0], 0]).reshape(6, 6)


def crossbar_star(f) -> np.ndarray:
    """
    Swapped force cross product: crossbar_star(f) @ v = cross_force(v) @ f.

    Equals -[[n x, fl x], [fl x, 0]] for f = (n, fl).
    """
    f = _as_force(f)
    return np.array([0, f[2], -f[1], 0, f[5], -f[4],
                     -f[2], 0, f[0], -f[5], 0, f[3],
                     f[1], -f[0], 0, f[4], -f[3], 0,
                     0, f[5], -f[4], 0, 0, 0,
                     -f[5], 0, f[3], 0, 0, 0,
                     f[4], -f[3], 0, 0, 0, 0]).reshape(6, 6)


def motion_cross(v, u) -> np.ndarray:
    """cross_motion(v) @ u without building the 6x6 matrix"""
    w, vl = v[:3], v[3:]
    uw, ul = u[:3], u[3:]
    return np.concatenate([_cross3(w, uw), _cross3(w, ul) + _cross3(vl, uw)])


def force_cross(v, f) -> np.ndarray:
    """cross_force(v) @ f without building the 6x6 matrix"""
    w, vl = v[:3], v[3:]
    n, fl = f[:3], f[3:]
    return np.concatenate([_cross3(w, n) + _cross3(vl, fl), _cross3(w, fl)])


def _cross3(a, b) -> np.ndarray:
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def _inertia_array(I) -> np.ndarray:
    if isinstance(I, SpatialInertia):
        return I.to_matrix()
    I = np.asarray(I)
    if I.shape != (6, 6):
        raise ShapeMismatchError(f"spatial inertia must be 6x6, got {I.shape}")
    return I


def twice_body_coriolis(I, v) -> np.ndarray:
    """(v x*) I - I (v x) + (I v) xbar*, the body-Coriolis matrix without the 1/2 factor"""
    I = _inertia_array(I)
    v = _as_motion(v)
    return cross_force(v) @ I - I @ cross_motion(v) + crossbar_star(I @ v)


def body_coriolis(I: Union[SpatialInertia, np.ndarray], v) -> np.ndarray:
    """
    Body-Coriolis matrix B(I, v) = 1/2 [(v x*) I - I (v x) + (I v) xbar*].

    Satisfies B(I, v) v = (v x*) I v, i.e. it reproduces the velocity
    product force of a rigid body.
    """
    return 0.5 * twice_body_coriolis(I, v)


# -- coordinate transforms ---------------------------------------------------

def _pose(X):
    if isinstance(X, SpatialTransform):
        return X.rotation, X.translation
    R, p = X
    return np.asarray(R), np.asarray(p)


def motion_matrix(X) -> np.ndarray:
    """6x6 motion transform [[R, 0], [p x R, R]] of a SpatialTransform or an (R, p) pair"""
    R, p = _pose(X)
    out = np.zeros((6, 6), dtype=object if object in (R.dtype, p.dtype) else float)
    out[:3, :3] = R
    out[3:, 3:] = R
    out[3:, :3] = skew(p) @ R
    return out


def force_matrix(X) -> np.ndarray:
    """6x6 force transform [[R, p x R], [0, R]], the inverse transpose of motion_matrix"""
    R, p = _pose(X)
    out = np.zeros((6, 6), dtype=object if object in (R.dtype, p.dtype) else float)
    out[:3, :3] = R
    out[3:, 3:] = R
    out[:3, 3:] = skew(p) @ R
    return out


def transform_motion(X: SpatialTransform, v):
    """Change coordinates of a motion vector (or 6xn motion matrix)"""
    if isinstance(v, MotionVector):
        return MotionVector.from_array(motion_matrix(X) @ v.to_array())
    if isinstance(v, ForceVector):
        raise SpatialKindError("transform_motion applied to a force vector")
    return motion_matrix(X) @ np.asarray(v)


def transform_force(X: SpatialTransform, f):
    """Change coordinates of a force vector (or 6xn force matrix)"""
    if isinstance(f, ForceVector):
        return ForceVector.from_array(force_matrix(X) @ f.to_array())
    if isinstance(f, MotionVector):
        raise SpatialKindError("transform_force applied to a motion vector")
    return force_matrix(X) @ np.asarray(f)


def transform_inertia(X: SpatialTransform, I):
    """
    Congruence transform X* I X^-1 of a spatial inertia.

    A SpatialInertia comes back as a SpatialInertia, a raw 6x6 matrix as a
    6x6 matrix.
    """
    Xf = force_matrix(X)
    if isinstance(I, SpatialInertia):
        return SpatialInertia.from_matrix(Xf @ I.to_matrix() @ Xf.T)
    return Xf @ _inertia_array(I) @ Xf.T


# -- se(3) ---------------------------------------------------------------------

def hat(v) -> np.ndarray:
    """4x4 se(3) matrix [[w x, vl], [0, 0]] of a motion vector"""
    v = _as_motion(v)
    return np.array([[0, -v[2], v[1], v[3]],
                     [v[2], 0, -v[0], v[4]],
                     [-v[1], v[0], 0, v[5]],
                     [0, 0, 0, 0]])


def vee(m) -> np.ndarray:
    """
    Inverse of hat().

    Raises:
        MalformedLieAlgebraError: If m is not 4x4 with a skew-symmetric
            rotation block and a zero bottom row (tolerance 1e-10)
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4):
        raise MalformedLieAlgebraError(f"se(3) element must be 4x4, got {m.shape}")
    W = m[:3, :3]
    if np.max(np.abs(W + W.T)) > VEE_TOLERANCE or np.max(np.abs(m[3, :])) > VEE_TOLERANCE:
        raise MalformedLieAlgebraError("matrix does not have the se(3) pattern [[w x, v], [0, 0]]")
    return np.concatenate([unskew(W), m[:3, 3]])
