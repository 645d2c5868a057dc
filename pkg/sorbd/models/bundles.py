"""
Derivative Bundle Models
Kinematics cache shared by the dynamics passes and the first/second-order
derivative bundles they produce
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass
class KinematicsCache:
    """
    Per-body ground-frame quantities of one (q, qd, qdd) evaluation.

    Body-Coriolis matrices (per body and composite) are stored WITHOUT the
    1/2 factor of body_coriolis(): B_i = (v x*) I - I (v x) + (I v) xbar*.
    Every derivative expression downstream uses this unhalved convention.

    Attributes:
        poses: Ground pose (R, p) of each body frame
        S: Ground-frame motion subspace, 6 x n_i
        v, a: Body velocities and accelerations (a includes -a_g)
        Psid: v_parent x S
        Psidd: a_parent x S + v_parent x Psid
        Phid: v x S
        I, B, f: Per-body inertia, body-Coriolis and net force I a + v x* I v
        IC, BC, fC: The same quantities summed over each subtree
    """
    poses: List[Tuple[np.ndarray, np.ndarray]]
    S: List[np.ndarray]
    v: List[np.ndarray]
    a: List[np.ndarray]
    Psid: List[np.ndarray]
    Psidd: List[np.ndarray]
    Phid: List[np.ndarray]
    I: List[np.ndarray]
    B: List[np.ndarray]
    f: List[np.ndarray]
    IC: List[np.ndarray]
    BC: List[np.ndarray]
    fC: List[np.ndarray]
    qdd: np.ndarray = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return len(self.S)


@dataclass
class DerivBundleFO:
    """
    First-order partial derivatives of inverse (and optionally forward)
    dynamics. Row index is the output, column index the variable.

    mass_factor is the Cholesky factor of M (scipy cho_factor form) when
    the forward-dynamics part was computed.
    """
    dtau_dq: np.ndarray
    dtau_dqd: np.ndarray
    dtau_dqdd: np.ndarray
    dfd_dq: Optional[np.ndarray] = None
    dfd_dqd: Optional[np.ndarray] = None
    dfd_dtau: Optional[np.ndarray] = None
    qdd: Optional[np.ndarray] = field(default=None, repr=False)
    mass_factor: Optional[Tuple[np.ndarray, Any]] = field(default=None, repr=False)

    @property
    def M(self) -> np.ndarray:
        """Mass matrix, identical to dtau_dqdd"""
        return self.dtau_dqdd

    @property
    def M_inv(self) -> Optional[np.ndarray]:
        return self.dfd_dtau


@dataclass
class DerivBundleSO_ID:
    """
    Second-order partial derivatives of inverse dynamics, each n x n x n
    with element [i, a, b] = d/dw_b (d tau_i / du_a).

    Attributes:
        d2tau_dq2: Columns q, pages q
        d2tau_dqd2: Columns qd, pages qd
        d2tau_dq_dqd: Columns qd, pages q
        dM_dq: dM_dq[a, b, c] = d M_ab / d q_c (also the qdd/q cross block)
    """
    d2tau_dq2: np.ndarray
    d2tau_dqd2: np.ndarray
    d2tau_dq_dqd: np.ndarray
    dM_dq: np.ndarray

    @property
    def n(self) -> int:
        return self.d2tau_dq2.shape[0]


@dataclass
class DerivBundleSO_FD:
    """
    Second-order partial derivatives of forward dynamics.

    Attributes:
        d2fd_dq2: Columns q, pages q
        d2fd_dqd2: Columns qd, pages qd
        d2fd_dq_dqd: Columns qd, pages q
        d2fd_dqd_dq: Columns q, pages qd (transpose_R of d2fd_dq_dqd)
        dminv_dq: dM^-1/dq, page c is d(M^-1)/dq_c (also d2FD / dtau dq)
        timings: Wall time in seconds of each stage of the call that built the bundle
    """
    d2fd_dq2: np.ndarray
    d2fd_dqd2: np.ndarray
    d2fd_dq_dqd: np.ndarray
    d2fd_dqd_dq: np.ndarray
    dminv_dq: np.ndarray
    qdd: Optional[np.ndarray] = field(default=None, repr=False)
    timings: Dict[str, float] = field(default_factory=dict, repr=False)
