"""
Second-Order Inverse Dynamics Service
Analytical second-order partial derivatives of inverse dynamics and the
mass-matrix derivative dM/dq, computed from one kinematics cache by a
triple-loop backward pass over (i, j, k) with k on the path from j to the
root and j on the path from i to the root.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..models.bundles import DerivBundleSO_ID, KinematicsCache
from ..models.model import Model
from ..utils.spatial_algebra import cross_force, cross_motion, crossbar_star, twice_body_coriolis
from ..utils.tensor_algebra import new_tensor, transpose_R
from .dynamics import compute_kinematics_cache

logger = logging.getLogger(__name__)


@dataclass
class _SupportColumns:
    """DoF columns of every joint on the path from body j to the root, own joint first"""
    index: np.ndarray
    own: int
    S: np.ndarray
    Psid: np.ndarray
    Psidd: np.ndarray
    Phid: np.ndarray


def _support_tables(model: Model, cache: KinematicsCache) -> List[_SupportColumns]:
    tables = []
    for j in range(model.N):
        path = model.support(j)
        index = np.concatenate([np.arange(model.n)[model.dof_slice(k)] for k in path])
        tables.append(_SupportColumns(
            index=index,
            own=model.joints[j].dof,
            S=np.hstack([cache.S[k] for k in path]),
            Psid=np.hstack([cache.Psid[k] for k in path]),
            Psidd=np.hstack([cache.Psidd[k] for k in path]),
            Phid=np.hstack([cache.Phid[k] for k in path]),
        ))
    return tables


def _dot_matrix(I: np.ndarray, s: np.ndarray) -> np.ndarray:
    """(s x*) I - I (s x): rate of a ground-frame inertia under motion s"""
    return cross_force(s) @ I - I @ cross_motion(s)


def idsva_so(model: Model, q, qd=None, qdd=None, gravity=None) -> DerivBundleSO_ID:
    """
    Second-order partial derivatives of tau = ID(q, qd, qdd).

    Args:
        model: Kinematic tree
        q: Joint configurations
        qd: Joint velocities (zero when omitted)
        qdd: Joint accelerations (zero when omitted)
        gravity: Optional override of model.gravity

    Returns:
        DerivBundleSO_ID with d2tau_dq2, d2tau_dqd2, d2tau_dq_dqd and dM_dq
    """
    cache = compute_kinematics_cache(model, q, qd, qdd, gravity)
    return idsva_so_from_cache(model, cache)


def idsva_so_from_cache(model: Model, cache: KinematicsCache) -> DerivBundleSO_ID:
    """
    Backward pass of the second-order algorithm.

    For each DoF p of body i (leaves to root) eight 6x6 matrices A0..A7 are
    formed from the composites IC_i, BC_i, fC_i; for each DoF t of each j on
    the path from i to the root twelve vectors u1..u12 follow; the scalar
    results for every DoF r of every k on the path from j to the root are
    written into all symmetric slots at once. Joint identity (j == i,
    k == j) selects the special branches.

    The mixed tensor is accumulated with columns q and pages qd and
    returned R~-transposed (columns qd, pages q).
    """
    n = model.n
    d2tau_dq2 = new_tensor(n, n, n)
    d2tau_dqd2 = new_tensor(n, n, n)
    cross = new_tensor(n, n, n)
    dM_dq = new_tensor(n, n, n)
    tables = _support_tables(model, cache)

    for i in range(model.N - 1, -1, -1):
        IC, BC, fC = cache.IC[i], cache.BC[i], cache.fC[i]
        for p in range(model.joints[i].dof):
            ii = model.dof_offsets[i] + p
            s_p = cache.S[i][:, p]
            psid_p = cache.Psid[i][:, p]
            psidd_p = cache.Psidd[i][:, p]
            phid_p = cache.Phid[i][:, p]

            B_phi = twice_body_coriolis(IC, s_p)
            B_psid = twice_body_coriolis(IC, psid_p)
            A0 = crossbar_star(IC @ s_p)
            A1 = _dot_matrix(IC, s_p)
            A2 = 2.0 * A0 - B_phi
            A3 = B_psid + _dot_matrix(BC, s_p)
            A4 = crossbar_star(BC.T @ s_p)
            A5 = crossbar_star(BC @ psid_p + IC @ psidd_p + cross_force(s_p) @ fC)
            A6 = cross_force(s_p) @ IC + A0
            A7 = crossbar_star(BC @ s_p + IC @ (psid_p + phid_p))

            for j in model.support(i):
                tab = tables[j]
                own = tab.index[:tab.own]
                rest = tab.index[tab.own:]
                Sa = tab.S[:, tab.own:]
                Pa = tab.Psid[:, tab.own:]
                Fa = tab.Phid[:, tab.own:]

                for t in range(model.joints[j].dof):
                    jj = model.dof_offsets[j] + t
                    s_t = cache.S[j][:, t]
                    psid_t = cache.Psid[j][:, t]
                    psidd_t = cache.Psidd[j][:, t]
                    phid_t = cache.Phid[j][:, t]

                    u1 = A3.T @ s_t
                    u2 = A1.T @ s_t
                    u3 = A3 @ psid_t + A1 @ psidd_t + A5 @ s_t
                    u4 = A6 @ s_t
                    u5 = A2 @ psid_t + A4 @ s_t
                    u6 = B_phi @ psid_t + A7 @ s_t
                    u7 = A3 @ s_t + A1 @ (psid_t + phid_t)
                    u8 = A4 @ s_t - B_phi.T @ psid_t
                    u9 = A0 @ s_t
                    u10 = B_phi @ s_t
                    u11 = B_phi.T @ s_t
                    u12 = A1 @ s_t

                    p1 = tab.Psid.T @ u11
                    p2 = tab.Psid.T @ u8 + tab.Psidd.T @ u9
                    d2tau_dq2[ii, jj, tab.index] = p2
                    cross[ii, tab.index, jj] = -p1

                    if j != i:
                        value = tab.Psid.T @ u1 + tab.Psidd.T @ u2
                        d2tau_dq2[jj, tab.index, ii] = value
                        d2tau_dq2[jj, ii, tab.index] = value
                        cross[jj, tab.index, ii] = p1
                        cross[jj, ii, tab.index] = tab.S.T @ u1 + (tab.Psid + tab.Phid).T @ u2
                        value = tab.S.T @ u11
                        d2tau_dqd2[jj, tab.index, ii] = value
                        d2tau_dqd2[jj, ii, tab.index] = value
                        value = tab.S.T @ u12
                        dM_dq[tab.index, jj, ii] = value
                        dM_dq[jj, tab.index, ii] = value

                    d2tau_dqd2[ii, jj, own] = -tab.S[:, :tab.own].T @ u2

                    if rest.size == 0:
                        continue
                    d2tau_dq2[ii, rest, jj] = p2[tab.own:]
                    d2tau_dq2[rest, ii, jj] = Sa.T @ u3
                    value = -Sa.T @ u11
                    d2tau_dqd2[ii, jj, rest] = value
                    d2tau_dqd2[ii, rest, jj] = value
                    cross[ii, jj, rest] = Sa.T @ u5 + (Pa + Fa).T @ u9
                    cross[rest, jj, ii] = Sa.T @ u6
                    value = Sa.T @ u9
                    dM_dq[rest, ii, jj] = value
                    dM_dq[ii, rest, jj] = value

                    if j != i:
                        d2tau_dq2[rest, jj, ii] = Sa.T @ u3
                        value = Sa.T @ u10
                        d2tau_dqd2[rest, ii, jj] = value
                        d2tau_dqd2[rest, jj, ii] = value
                        cross[rest, ii, jj] = Sa.T @ u7
                    else:
                        d2tau_dqd2[rest, jj, ii] = Sa.T @ u4

    logger.debug(f"idsva_so computed for N={model.N}, n={n}")
    return DerivBundleSO_ID(
        d2tau_dq2=d2tau_dq2,
        d2tau_dqd2=d2tau_dqd2,
        d2tau_dq_dqd=transpose_R(cross),
        dM_dq=dM_dq,
    )


def d2tau_cross_qdd(model: Model, q) -> np.ndarray:
    """
    Cross second derivative of tau with respect to qdd and q, which is
    dM/dq: element [a, b, c] = d M_ab / d q_c. Pages are symmetric.
    """
    return idsva_so(model, q).dM_dq


def so_symmetry_views(bundle: DerivBundleSO_ID) -> Dict[str, np.ndarray]:
    """
    R~-companions of the mixed second-order tensors, derived without
    recomputation.

    Returns:
        Dictionary with d2tau_dqd_dq (columns q, pages qd) and
        d2tau_dq_dqdd (columns q, pages qdd)
    """
    return {
        'd2tau_dqd_dq': transpose_R(bundle.d2tau_dq_dqd),
        'd2tau_dq_dqdd': transpose_R(bundle.dM_dq),
    }


def stack_id_so(bundle: DerivBundleSO_ID) -> np.ndarray:
    """
    Full n x 3n x 3n second-order ID tensor over the stacked variable
    (q, qd, qdd). The qd-qdd and qdd-qdd blocks are zero.
    """
    n = bundle.n
    views = so_symmetry_views(bundle)
    q, qd, qdd = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n)
    out = new_tensor(n, 3 * n, 3 * n)
    out[:, q, q] = bundle.d2tau_dq2
    out[:, qd, qd] = bundle.d2tau_dqd2
    out[:, qd, q] = bundle.d2tau_dq_dqd
    out[:, q, qd] = views['d2tau_dqd_dq']
    out[:, qdd, q] = bundle.dM_dq
    out[:, q, qdd] = views['d2tau_dq_dqdd']
    return out
