"""
First-Order Derivative Service
Analytical first-order partial derivatives of inverse dynamics (IDSVA),
the zero-velocity variant used to contract dM/dq with a vector (IDFOZA),
and forward-dynamics derivatives obtained from them.

Derivatives with respect to multi-DoF joint configurations are Lie
derivatives along the joint generators, consistent with integrate_config.
"""

import logging
from typing import Optional

import numpy as np
from scipy.linalg import cho_solve

from ..config import settings
from ..models.bundles import DerivBundleFO, KinematicsCache
from ..models.errors import ContractViolationError, ShapeMismatchError
from ..models.model import ROOT, Model
from ..utils.spatial_algebra import cross_force, cross_motion, crossbar_star
from ..utils.tensor_algebra import new_tensor
from .dynamics import (
    aba, assemble_mass_matrix, compute_kinematics_cache, factorize_mass_matrix, forward_poses,
    ground_inertia, normalize_configs, rnea, subtree_sums,
)

logger = logging.getLogger(__name__)

# Relative residual above which an explicit qdd is rejected by fd_fo debug checks
CONSISTENCY_TOLERANCE = 1e-8


def idsva_fo(model: Model, q, qd=None, qdd=None, gravity=None) -> DerivBundleFO:
    """
    First-order partial derivatives of tau = ID(q, qd, qdd).

    Args:
        model: Kinematic tree
        q: Joint configurations
        qd: Joint velocities (zero when omitted)
        qdd: Joint accelerations (zero when omitted)
        gravity: Optional override of model.gravity

    Returns:
        DerivBundleFO with dtau_dq, dtau_dqd and dtau_dqdd (= M)
    """
    cache = compute_kinematics_cache(model, q, qd, qdd, gravity)
    return idsva_fo_from_cache(model, cache)


def idsva_fo_from_cache(model: Model, cache: KinematicsCache) -> DerivBundleFO:
    """
    Assemble the first-order ID derivatives from a kinematics cache.

    For every body i and every j on the path from i to the root:

        dtau_i/dq_j   = S_i^T (BC_i Psid_j + IC_i Psidd_j)
        dtau_i/dqd_j  = S_i^T (BC_i S_j + IC_i (Psid_j + Phid_j))

    and for strict ancestors j the transposed blocks

        dtau_j/dq_i   = S_j^T (BC_i Psid_i + IC_i Psidd_i + (fC_i xbar*) S_i)
        dtau_j/dqd_i  = S_j^T (BC_i S_i + IC_i (Psid_i + Phid_i))

    BC is the unhalved composite body-Coriolis matrix of the cache.
    """
    n = model.n
    dtype = object if any(x.dtype == object for x in cache.fC) else float
    dtau_dq = np.zeros((n, n), dtype=dtype)
    dtau_dqd = np.zeros((n, n), dtype=dtype)
    S, IC, BC = cache.S, cache.IC, cache.BC

    for i in range(model.N):
        sl_i = model.dof_slice(i)
        t_q = BC[i] @ cache.Psid[i] + IC[i] @ cache.Psidd[i] + crossbar_star(cache.fC[i]) @ S[i]
        t_qd = BC[i] @ S[i] + IC[i] @ (cache.Psid[i] + cache.Phid[i])
        left_q = S[i].T @ BC[i]
        left_I = S[i].T @ IC[i]
        for j in model.support(i):
            sl_j = model.dof_slice(j)
            dtau_dq[sl_i, sl_j] = left_q @ cache.Psid[j] + left_I @ cache.Psidd[j]
            dtau_dqd[sl_i, sl_j] = left_q @ S[j] + left_I @ (cache.Psid[j] + cache.Phid[j])
            if j != i:
                dtau_dq[sl_j, sl_i] = S[j].T @ t_q
                dtau_dqd[sl_j, sl_i] = S[j].T @ t_qd

    M = assemble_mass_matrix(model, S, IC)
    return DerivBundleFO(dtau_dq=dtau_dq, dtau_dqd=dtau_dqd, dtau_dqdd=M, qdd=cache.qdd)


def idfoza(model: Model, q, b) -> np.ndarray:
    """
    Contract dM/dq with an n-vector: result[a, c] = sum_b dM_ab/dq_c b_b.

    Equivalent to idsva_fo with zero velocity, zero gravity and qdd = b,
    where only the mass-matrix term M(q) b survives in dtau/dq.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (model.n,):
        raise ShapeMismatchError(f"b must have shape ({model.n},), got {b.shape}")
    return idfoza_columns(model, q, b.reshape(-1, 1))[:, 0, :]


def idfoza_columns(model: Model, q, B) -> np.ndarray:
    """
    IDFOZA for every column of an n x m matrix: result[:, a, :] =
    idfoza(model, q, B[:, a]).

    Poses, subspaces, composite inertias and the per-DoF operators
    a -> a x s and f -> s x* f depend on q only and are built once. Each
    column then runs the zero-velocity acceleration pass and fills the
    lower blocks S_i^T IC_i Psidd_j (j on the path of i) and the upper
    blocks S_j^T (IC_i Psidd_i + (fC_i xbar*) S_i) (j a strict ancestor
    of i) as two masked products.

    Returns:
        n x m x n tensor
    """
    B = np.asarray(B, dtype=float)
    n, N = model.n, model.N
    if B.ndim != 2 or B.shape[0] != n:
        raise ShapeMismatchError(f"B must have {n} rows, got shape {B.shape}")

    poses, S = forward_poses(model, normalize_configs(model, q))
    I = [ground_inertia(model, i, poses[i]) for i in range(N)]
    IC = subtree_sums(model, I)
    S_all = np.hstack(S)
    left = np.vstack([S[i].T @ IC[i] for i in range(N)])
    # Stacked per-DoF rows: psidd_k = -(s_k x) a_parent, t_k = IC psidd_k + (s_k x*) fC
    rate = [np.vstack([-cross_motion(s) for s in S[i].T]) for i in range(N)]
    inertial_rate = [np.vstack([IC[i] @ -cross_motion(s) for s in S[i].T]) for i in range(N)]
    force_rate = [np.vstack([cross_force(s) for s in S[i].T]) for i in range(N)]

    path = np.zeros((N, N), dtype=bool)
    for i in range(N):
        path[i, model.support(i)] = True
    body = np.asarray(model.dof_body)
    lower = path[np.ix_(body, body)]
    upper = path.T[np.ix_(body, body)] & (body[:, None] != body[None, :])

    out = new_tensor(n, B.shape[1], n)
    zero = np.zeros(6)
    a, a_parent, f = ([None] * N for _ in range(3))
    for col in range(B.shape[1]):
        b = B[:, col]
        for i in range(N):
            parent = model.parents[i]
            a_parent[i] = zero if parent == ROOT else a[parent]
            a[i] = a_parent[i] + S[i] @ b[model.dof_slice(i)]
            f[i] = I[i] @ a[i]
        fC = subtree_sums(model, f)
        Psidd = np.concatenate([rate[i] @ a_parent[i] for i in range(N)]).reshape(n, 6).T
        T = np.concatenate([inertial_rate[i] @ a_parent[i] + force_rate[i] @ fC[i]
                            for i in range(N)]).reshape(n, 6).T
        out[:, col, :] = np.where(lower, left @ Psidd, 0.0) + np.where(upper, S_all.T @ T, 0.0)
    return out


def fd_fo(model: Model, q, qd, tau, qdd: Optional[np.ndarray] = None,
          gravity=None) -> DerivBundleFO:
    """
    First-order partial derivatives of qdd = FD(q, qd, tau).

    dFD/du = -M^-1 dID/du evaluated at the consistent acceleration
    qdd0 = aba(q, qd, tau). One Cholesky factor of the mass matrix from the
    ID pass is reused for every solve.

    Args:
        qdd: Precomputed qdd0; computed with aba when omitted. With
            settings.debug_checks enabled it is checked against tau.

    Returns:
        DerivBundleFO with the ID part at qdd0 plus dfd_dq, dfd_dqd and
        dfd_dtau (= M^-1)

    Raises:
        FactorizationError: If the mass matrix cannot be factored
        ContractViolationError: If debug checks find qdd inconsistent with tau
    """
    tau = np.asarray(tau, dtype=float)
    if qdd is None:
        qdd = aba(model, q, qd, tau, gravity=gravity)
    elif settings.debug_checks:
        residual = rnea(model, q, qd, qdd, gravity=gravity) - tau
        scale = max(1.0, float(np.max(np.abs(tau), initial=0.0)))
        if np.max(np.abs(residual), initial=0.0) > CONSISTENCY_TOLERANCE * scale:
            raise ContractViolationError("qdd is not the forward-dynamics solution for tau")

    cache = compute_kinematics_cache(model, q, qd, qdd, gravity)
    return fd_fo_from_cache(model, cache)


def fd_fo_from_cache(model: Model, cache: KinematicsCache, factor=None) -> DerivBundleFO:
    """
    Forward-dynamics first-order derivatives from a cache evaluated at the
    consistent acceleration qdd0.

    Args:
        factor: Cholesky factor of M to reuse; factored from the cache's
            mass matrix when omitted. Either way it is kept on the bundle
            as mass_factor.
    """
    bundle = idsva_fo_from_cache(model, cache)
    if factor is None:
        factor = factorize_mass_matrix(bundle.M)
    M_inv = cho_solve(factor, np.eye(model.n))
    M_inv = 0.5 * (M_inv + M_inv.T)

    bundle.dfd_dq = -cho_solve(factor, bundle.dtau_dq)
    bundle.dfd_dqd = -cho_solve(factor, bundle.dtau_dqd)
    bundle.dfd_dtau = M_inv
    bundle.qdd = np.asarray(cache.qdd, dtype=float)
    bundle.mass_factor = factor
    logger.debug(f"fd_fo computed for n={model.n}")
    return bundle
