"""
Dynamics Service
Recursive Newton-Euler (inverse dynamics), articulated-body (forward
dynamics) and composite-rigid-body (mass matrix) algorithms, mass-matrix
inverse application and the kinematics cache shared by the derivative
passes.

All quantities are expressed in the ground frame. The algorithms are
generic over the scalar type: real inputs run on float arrays, inputs
carrying BiComplex scalars run on object arrays, with no change to the
code path besides the dense solves.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..models.bundles import KinematicsCache
from ..models.errors import FactorizationError, ShapeMismatchError, SingularInertiaError
from ..models.model import ROOT, Model
from ..utils.bicomplex import scalar_dtype
from ..utils.spatial_algebra import (
    cross_motion, force_cross, force_matrix, motion_cross, motion_matrix, twice_body_coriolis,
)
from .joints import joint_pose

logger = logging.getLogger(__name__)

ZERO_GRAVITY = np.zeros(6)

MINV_STRATEGIES = ('cholesky', 'aba')


# -- input normalisation -------------------------------------------------------

def normalize_configs(model: Model, q) -> List:
    """
    Return one configuration per joint. A flat vector is accepted for
    models made only of 1-DoF joints.
    """
    if isinstance(q, np.ndarray) and q.ndim == 1 and not model.has_multi_dof:
        q = list(q)
    q = list(q)
    if len(q) != model.N:
        raise ShapeMismatchError(f"expected {model.N} joint configurations, got {len(q)}")
    return q


def _joint_vector(model: Model, x, name: str) -> np.ndarray:
    if x is None:
        return np.zeros(model.n)
    arr = np.asarray(x)
    if arr.shape != (model.n,):
        raise ShapeMismatchError(f"{name} must have shape ({model.n},), got {arr.shape}")
    return arr


def _base_acceleration(model: Model, gravity) -> np.ndarray:
    g = model.gravity if gravity is None else np.asarray(gravity, dtype=float)
    if g.shape != (6,):
        raise ShapeMismatchError(f"gravity must be a spatial 6-vector, got shape {g.shape}")
    return -g


# -- shared passes -------------------------------------------------------------

def forward_poses(model: Model, q: Sequence) -> Tuple[List, List[np.ndarray]]:
    """
    Ground poses (R, p) of every body frame and the ground-frame motion
    subspaces S_i.
    """
    poses, subspaces = [], []
    for i, joint in enumerate(model.joints):
        Rj, pj = joint_pose(joint, q[i])
        placement = model.placements[i]
        R = placement.rotation @ Rj
        p = placement.translation + placement.rotation @ pj
        parent = model.parents[i]
        if parent != ROOT:
            Rp, pp = poses[parent]
            R, p = Rp @ R, pp + Rp @ p
        poses.append((R, p))
        subspaces.append(motion_matrix((R, p)) @ joint.motion_subspace)
    return poses, subspaces


def ground_inertia(model: Model, i: int, pose) -> np.ndarray:
    """Spatial inertia of body i in ground coordinates"""
    Xf = force_matrix(pose)
    return Xf @ model.inertia_matrices[i] @ Xf.T


def subtree_sums(model: Model, values: List[np.ndarray]) -> List[np.ndarray]:
    """Accumulate per-body quantities over each subtree, children to parents"""
    acc = list(values)
    for i in range(model.N - 1, -1, -1):
        parent = model.parents[i]
        if parent != ROOT:
            acc[parent] = acc[parent] + acc[i]
    return acc


def compute_kinematics_cache(model: Model, q, qd=None, qdd=None, gravity=None) -> KinematicsCache:
    """
    Forward pass of the derivative algorithms.

    Computes ground-frame poses, subspaces, velocities and accelerations,
    the subspace rates Psid = v_parent x S, Psidd = a_parent x S +
    v_parent x Psid and Phid = v x S, the per-body inertia, unhalved
    body-Coriolis matrix and net force, and their subtree composites.

    Args:
        model: Kinematic tree
        q: Joint configurations
        qd: Joint velocities (zero when omitted)
        qdd: Joint accelerations (zero when omitted)
        gravity: Optional override of model.gravity

    Returns:
        Populated KinematicsCache
    """
    q = normalize_configs(model, q)
    qd = _joint_vector(model, qd, 'qd')
    qdd = _joint_vector(model, qdd, 'qdd')
    a_base = _base_acceleration(model, gravity)

    poses, S = forward_poses(model, q)
    N = model.N
    v, a, Psid, Psidd, Phid, I, B, f = ([None] * N for _ in range(8))
    zero = np.zeros(6)
    for i in range(N):
        sl = model.dof_slice(i)
        parent = model.parents[i]
        v_parent = zero if parent == ROOT else v[parent]
        a_parent = a_base if parent == ROOT else a[parent]

        v[i] = v_parent + S[i] @ qd[sl]
        cross_parent = cross_motion(v_parent)
        Psid[i] = cross_parent @ S[i]
        Phid[i] = cross_motion(v[i]) @ S[i]
        Psidd[i] = cross_motion(a_parent) @ S[i] + cross_parent @ Psid[i]
        a[i] = a_parent + S[i] @ qdd[sl] + Phid[i] @ qd[sl]

        I[i] = ground_inertia(model, i, poses[i])
        B[i] = twice_body_coriolis(I[i], v[i])
        f[i] = I[i] @ a[i] + force_cross(v[i], I[i] @ v[i])

    return KinematicsCache(
        poses=poses, S=S, v=v, a=a, Psid=Psid, Psidd=Psidd, Phid=Phid,
        I=I, B=B, f=f,
        IC=subtree_sums(model, I), BC=subtree_sums(model, B), fC=subtree_sums(model, f),
        qdd=qdd,
    )


# -- inverse dynamics ----------------------------------------------------------

def rnea(model: Model, q, qd=None, qdd=None, gravity=None) -> np.ndarray:
    """
    Inverse dynamics tau = M(q) qdd + C(q, qd) qd + g(q).

    Gravity enters through the base acceleration a_0 = -a_g; pass
    gravity=ZERO_GRAVITY to drop it.
    """
    q = normalize_configs(model, q)
    qd = _joint_vector(model, qd, 'qd')
    qdd = _joint_vector(model, qdd, 'qdd')
    a_base = _base_acceleration(model, gravity)
    dtype = scalar_dtype(qd, qdd, *q)

    poses, S = forward_poses(model, q)
    N = model.N
    v, a, f = [None] * N, [None] * N, [None] * N
    zero = np.zeros(6)
    for i in range(N):
        sl = model.dof_slice(i)
        parent = model.parents[i]
        v_parent = zero if parent == ROOT else v[parent]
        a_parent = a_base if parent == ROOT else a[parent]
        vJ = S[i] @ qd[sl]
        v[i] = v_parent + vJ
        a[i] = a_parent + S[i] @ qdd[sl] + motion_cross(v[i], vJ)
        I0 = ground_inertia(model, i, poses[i])
        f[i] = I0 @ a[i] + force_cross(v[i], I0 @ v[i])

    tau = np.zeros(model.n, dtype=dtype)
    for i in range(N - 1, -1, -1):
        tau[model.dof_slice(i)] = S[i].T @ f[i]
        parent = model.parents[i]
        if parent != ROOT:
            f[parent] = f[parent] + f[i]
    return tau


def tau_from_cache(model: Model, cache: KinematicsCache) -> np.ndarray:
    """tau_i = S_i^T fC_i from an existing cache"""
    dtype = object if any(f.dtype == object for f in cache.fC) else float
    tau = np.zeros(model.n, dtype=dtype)
    for i in range(model.N):
        tau[model.dof_slice(i)] = cache.S[i].T @ cache.fC[i]
    return tau


# -- forward dynamics ----------------------------------------------------------

def _generic_inverse(D: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a small SPD matrix over any scalar type"""
    n = D.shape[0]
    A = np.array(D, dtype=object)
    inv = np.eye(n, dtype=object)
    for k in range(n):
        pivot = A[k, k]
        A[k] = A[k] / pivot
        inv[k] = inv[k] / pivot
        for r in range(n):
            if r != k:
                factor = A[r, k]
                A[r] = A[r] - factor * A[k]
                inv[r] = inv[r] - factor * inv[k]
    return inv


def _invert_joint_inertia(D: np.ndarray, body: int) -> np.ndarray:
    if D.dtype == object:
        try:
            return _generic_inverse(D)
        except ZeroDivisionError:
            raise SingularInertiaError(f"articulated inertia of joint {body} is singular")
    try:
        np.linalg.cholesky(D)
    except np.linalg.LinAlgError:
        raise SingularInertiaError(f"articulated inertia of joint {body} is not positive definite")
    return np.linalg.inv(D)


def aba(model: Model, q, qd=None, tau=None, gravity=None) -> np.ndarray:
    """
    Forward dynamics qdd = M(q)^-1 (tau - C(q, qd) qd - g(q)).

    Args:
        gravity: Optional override of model.gravity; ZERO_GRAVITY together
            with zero qd turns this into the ABA-zero algorithm (M^-1 tau)

    Raises:
        SingularInertiaError: If an articulated joint inertia cannot be inverted
    """
    q = normalize_configs(model, q)
    qd = _joint_vector(model, qd, 'qd')
    tau = _joint_vector(model, tau, 'tau')
    a_base = _base_acceleration(model, gravity)
    dtype = scalar_dtype(qd, tau, *q)

    poses, S = forward_poses(model, q)
    N = model.N
    v, c, IA, pA = [None] * N, [None] * N, [None] * N, [None] * N
    zero = np.zeros(6)
    for i in range(N):
        sl = model.dof_slice(i)
        parent = model.parents[i]
        v_parent = zero if parent == ROOT else v[parent]
        vJ = S[i] @ qd[sl]
        v[i] = v_parent + vJ
        c[i] = motion_cross(v[i], vJ)
        IA[i] = ground_inertia(model, i, poses[i])
        pA[i] = force_cross(v[i], IA[i] @ v[i])

    U, Dinv, u = [None] * N, [None] * N, [None] * N
    for i in range(N - 1, -1, -1):
        sl = model.dof_slice(i)
        U[i] = IA[i] @ S[i]
        Dinv[i] = _invert_joint_inertia(S[i].T @ U[i], i)
        u[i] = tau[sl] - S[i].T @ pA[i]
        parent = model.parents[i]
        if parent != ROOT:
            Ia = IA[i] - U[i] @ Dinv[i] @ U[i].T
            pa = pA[i] + Ia @ c[i] + U[i] @ (Dinv[i] @ u[i])
            IA[parent] = IA[parent] + Ia
            pA[parent] = pA[parent] + pa

    qdd = np.zeros(model.n, dtype=dtype)
    a = [None] * N
    for i in range(N):
        parent = model.parents[i]
        a_prime = (a_base if parent == ROOT else a[parent]) + c[i]
        qdd_i = Dinv[i] @ (u[i] - U[i].T @ a_prime)
        qdd[model.dof_slice(i)] = qdd_i
        a[i] = a_prime + S[i] @ qdd_i
    return qdd


# -- mass matrix ---------------------------------------------------------------

def assemble_mass_matrix(model: Model, S: List[np.ndarray], IC: List[np.ndarray]) -> np.ndarray:
    """M_ji = S_j^T IC_i S_i for every j on the path from i to the root"""
    dtype = object if any(x.dtype == object for x in IC) else float
    M = np.zeros((model.n, model.n), dtype=dtype)
    for i in range(model.N):
        sl_i = model.dof_slice(i)
        F = IC[i] @ S[i]
        diagonal = S[i].T @ F
        M[sl_i, sl_i] = 0.5 * (diagonal + diagonal.T)
        for j in model.ancestors(i):
            sl_j = model.dof_slice(j)
            block = S[j].T @ F
            M[sl_j, sl_i] = block
            M[sl_i, sl_j] = block.T
    return M


def crba(model: Model, q) -> np.ndarray:
    """Joint-space mass matrix, symmetric by construction"""
    q = normalize_configs(model, q)
    poses, S = forward_poses(model, q)
    IC = subtree_sums(model, [ground_inertia(model, i, poses[i]) for i in range(model.N)])
    return assemble_mass_matrix(model, S, IC)


def factorize_mass_matrix(M: np.ndarray):
    """
    Cholesky factor of M for repeated solves.

    Raises:
        FactorizationError: If M is not symmetric positive definite
    """
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise FactorizationError("mass matrix contains non-finite entries")
    try:
        return cho_factor(M, lower=True)
    except LinAlgError:
        raise FactorizationError("mass matrix is not positive definite")


def minv_apply(model: Model, q, B, strategy: str = 'cholesky', factor=None) -> np.ndarray:
    """
    Apply the inverse mass matrix to the columns of B.

    Args:
        model: Kinematic tree
        q: Joint configurations
        B: n x m matrix (or n-vector)
        strategy: 'cholesky' factors the CRBA mass matrix once; 'aba' runs
            the ABA-zero algorithm (zero velocity and gravity) per column
        factor: Cholesky factor of M(q) to reuse with the 'cholesky' strategy

    Returns:
        M^-1 B with the shape of B

    Raises:
        FactorizationError: If the mass matrix cannot be factored
    """
    B = np.asarray(B, dtype=float)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    if B.ndim != 2 or B.shape[0] != model.n:
        raise ShapeMismatchError(f"right-hand side must have {model.n} rows, got shape {B.shape}")
    if strategy not in MINV_STRATEGIES:
        raise ValueError(f"Unknown minv strategy: {strategy}. Available: {list(MINV_STRATEGIES)}")

    q = normalize_configs(model, q)
    if strategy == 'cholesky':
        if factor is None:
            factor = factorize_mass_matrix(crba(model, q))
        result = cho_solve(factor, B)
    else:
        zero = np.zeros(model.n)
        result = np.zeros_like(B)
        for k in range(B.shape[1]):
            result[:, k] = aba(model, q, zero, B[:, k], gravity=ZERO_GRAVITY)
    return result[:, 0] if vector else result
