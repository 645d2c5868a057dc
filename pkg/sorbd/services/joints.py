"""
Joint Service
Configuration-group operations for joints: identity, right-perturbation,
logarithm, joint poses and random sampling
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..config import settings
from ..models.errors import ShapeMismatchError
from ..models.joint import JointKind, JointModel
from ..models.model import Model, State
from ..models.spatial import SpatialTransform
from ..utils import bicomplex as bc
from ..utils.lie_group import exp_se3, exp_so3, log_se3, log_so3, random_rotation, renormalize

logger = logging.getLogger(__name__)


def identity_config(joint: JointModel):
    """Identity element of the joint's configuration group"""
    if joint.kind == JointKind.SPHERICAL:
        return np.eye(3)
    if joint.kind == JointKind.FLOATING:
        return np.eye(4)
    return 0.0


def _config_kind(q) -> str:
    shape = np.shape(q)
    if shape in ((), (1,)):
        return 'scalar'
    if shape == (3, 3):
        return 'rotation'
    if shape == (4, 4):
        return 'transform'
    raise ShapeMismatchError(f"unrecognised joint configuration of shape {shape}")


def integrate_config(q, delta, eps=1.0, renormalize_tol: Optional[float] = None):
    """
    Right-perturb a joint configuration: q * exp((sum_j delta_j E_j) eps).

    For 1-DoF joints this is q + delta * eps. Rotations and transforms use
    Rodrigues for real inputs and a truncated series when delta or eps carry
    bi-complex scalars. Real rotation parts are re-projected onto SO(3) when
    their orthonormality drift exceeds renormalize_tol.

    Args:
        q: Current configuration (float, 3x3 rotation or 4x4 transform)
        delta: Direction in the joint's local coordinates (length n_i)
        eps: Step along the direction

    Returns:
        The perturbed configuration, of the same kind as q
    """
    tol = settings.renormalize_tol if renormalize_tol is None else renormalize_tol
    kind = _config_kind(q)
    delta = np.atleast_1d(np.asarray(delta, dtype=object if bc.is_bicomplex(delta) else None))
    step = delta * eps

    if kind == 'scalar':
        if step.shape != (1,):
            raise ShapeMismatchError(f"1-DoF joint expects a 1-vector direction, got {step.shape}")
        return q + step[0]

    if kind == 'rotation':
        if step.shape != (3,):
            raise ShapeMismatchError(f"spherical joint expects a 3-vector direction, got {step.shape}")
        result = np.asarray(q) @ exp_so3(step)
        if result.dtype != object:
            result = renormalize(result, tol)
        return result

    if step.shape != (6,):
        raise ShapeMismatchError(f"floating joint expects a 6-vector direction, got {step.shape}")
    result = np.asarray(q) @ exp_se3(step)
    if result.dtype != object:
        result = result.copy()
        result[:3, :3] = renormalize(result[:3, :3], tol)
    return result


def config_log(q_ref, q) -> np.ndarray:
    """
    Inverse of integrate_config with eps = 1: the direction delta with
    integrate_config(q_ref, delta) = q.
    """
    kind = _config_kind(q_ref)
    if kind == 'scalar':
        return np.array([float(q) - float(q_ref)])
    if kind == 'rotation':
        return log_so3(np.asarray(q_ref).T @ np.asarray(q))
    return log_se3(np.linalg.inv(np.asarray(q_ref)) @ np.asarray(q))


def joint_pose(joint: JointModel, q) -> Tuple[np.ndarray, np.ndarray]:
    """
    Generic (R, p) of the joint transform exp(hat(s) q) for 1-DoF joints,
    or the configuration itself for spherical/floating joints.
    """
    if joint.kind == JointKind.SPHERICAL:
        return np.asarray(q), np.zeros(3)
    if joint.kind == JointKind.FLOATING:
        T = np.asarray(q)
        return T[:3, :3], T[:3, 3]
    axis = joint.kind.value[-1]
    if joint.is_prismatic:
        p = np.zeros(3, dtype=object if bc.is_bicomplex(q) else float)
        p['xyz'.index(axis)] = q
        return np.eye(3), p
    c, s = bc.cos(q), bc.sin(q)
    if axis == 'x':
        R = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    elif axis == 'y':
        R = np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    else:
        R = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    return R, np.zeros(3)


def joint_transform(joint: JointModel, q, placement: Optional[SpatialTransform] = None) -> SpatialTransform:
    """
    Child-to-parent transform of a joint: placement followed by the joint
    motion.

    Raises:
        InvalidRotationError: If the configuration holds a malformed rotation
    """
    R, p = joint_pose(joint, q)
    motion = SpatialTransform(np.asarray(R, dtype=float), np.asarray(p, dtype=float))
    if placement is None:
        return motion
    return placement.compose(motion)


def random_config(joint: JointModel, rng: np.random.Generator):
    """Random configuration on the joint's group"""
    if joint.kind == JointKind.SPHERICAL:
        return random_rotation(rng)
    if joint.kind == JointKind.FLOATING:
        T = np.eye(4)
        T[:3, :3] = random_rotation(rng)
        T[:3, 3] = rng.uniform(-1.0, 1.0, 3)
        return T
    if joint.is_revolute:
        return float(rng.uniform(-np.pi, np.pi))
    return float(rng.uniform(-1.0, 1.0))


def random_state(model: Model, rng: np.random.Generator) -> State:
    """
    Draw a random State: configurations on each joint group, velocities,
    accelerations and torques uniform in [-1, 1].
    """
    q = [random_config(joint, rng) for joint in model.joints]
    qd = rng.uniform(-1.0, 1.0, model.n)
    qdd = rng.uniform(-1.0, 1.0, model.n)
    tau = rng.uniform(-1.0, 1.0, model.n)
    return State(q=q, qd=qd, qdd=qdd, tau=tau)


def perturb_configs(model: Model, q, direction: np.ndarray, eps=1.0):
    """
    Apply integrate_config joint by joint with a flat n-vector direction.
    """
    direction = np.asarray(direction, dtype=object if bc.is_bicomplex(direction) else float)
    if direction.shape != (model.n,):
        raise ShapeMismatchError(f"direction must have shape ({model.n},), got {direction.shape}")
    return [integrate_config(q[i], direction[model.dof_slice(i)], eps) for i in range(model.N)]

