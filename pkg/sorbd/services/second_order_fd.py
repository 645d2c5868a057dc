"""
Second-Order Forward Dynamics Service
Second-order partial derivatives of qdd = FD(q, qd, tau) assembled from the
inverse-dynamics derivatives by implicit differentiation of ID(FD(x)) = tau:

    d2FD/du dw = -M^-1 [ d2ID/du dw + (dM/dw)(dFD/du) + ((dM/du)(dFD/dw))^R~ ]

The bracket is the Inner-Term and its product with -M^-1 the Outer-Term.
Both have two interchangeable strategies selected by a StrategyConfig.
"""

import logging
import time
from typing import Dict, Optional

import numpy as np

from ..config import settings
from ..models.bundles import DerivBundleFO, DerivBundleSO_FD, DerivBundleSO_ID
from ..models.errors import ShapeMismatchError
from ..models.model import Model
from ..models.schemas import InnerStrategy, OuterStrategy, StrategyConfig
from ..utils.tensor_algebra import (
    matmul_pagewise, pagewise_matmul, tensor_matmul, transpose_R, transpose_T,
)
from .dynamics import aba, compute_kinematics_cache, minv_apply, normalize_configs
from .first_order import fd_fo_from_cache, idfoza_columns
from .second_order_id import idsva_so_from_cache

logger = logging.getLogger(__name__)

PAIRS = ('qq', 'qdqd', 'qqd', 'qdq')


def _check_tensor(T: np.ndarray, n: int, name: str) -> None:
    if T.shape != (n, n, n):
        raise ShapeMismatchError(f"{name} must be {n}x{n}x{n}, got {T.shape}")


def correction_term(dM_dq: np.ndarray, dfd_du: np.ndarray, strategy: InnerStrategy,
                    model: Optional[Model] = None, q=None) -> np.ndarray:
    """
    (dM/dq)(dFD/du): element [i, a, c] = sum_l dM_il/dq_c dFD_l/du_a.

    DTM contracts the dense dM/dq tensor; IDFOZA runs one zero-velocity
    pass per column of dFD/du over a shared configuration pass and needs
    model and q.
    """
    n = dfd_du.shape[0]
    if dfd_du.shape != (n, n):
        raise ShapeMismatchError(f"dFD/du must be square, got {dfd_du.shape}")
    if strategy == InnerStrategy.DTM:
        _check_tensor(dM_dq, n, "dM_dq")
        return tensor_matmul(dM_dq, dfd_du)
    if model is None or q is None:
        raise ValueError("IDFOZA strategy needs the model and configuration")
    return idfoza_columns(model, q, dfd_du)


def inner_term(pair: str, id_so: DerivBundleSO_ID, fo: DerivBundleFO,
               strategy: InnerStrategy = InnerStrategy.DTM,
               model: Optional[Model] = None, q=None) -> np.ndarray:
    """
    Inner-Term for one variable pair.

    Args:
        pair: 'qq', 'qdqd', 'qqd' (columns qd, pages q) or 'qdq'
            (columns q, pages qd)
        id_so: ID second-order bundle at the consistent qdd0
        fo: FD first-order bundle (dfd_dq, dfd_dqd) at the same point
        strategy: DTM or IDFOZA for the correction products

    Returns:
        n x n x n Inner-Term tensor
    """
    if pair not in PAIRS:
        raise ValueError(f"Unknown variable pair: {pair}. Available: {list(PAIRS)}")
    if pair == 'qdqd':
        return id_so.d2tau_dqd2.copy(order='F')
    if pair == 'qq':
        P = correction_term(id_so.dM_dq, fo.dfd_dq, strategy, model, q)
        return id_so.d2tau_dq2 + P + transpose_R(P)
    mixed = id_so.d2tau_dq_dqd + correction_term(id_so.dM_dq, fo.dfd_dqd, strategy, model, q)
    return mixed if pair == 'qqd' else transpose_R(mixed)


def outer_term(inner: np.ndarray, model: Model, q, strategy: OuterStrategy = OuterStrategy.DTM,
               factor=None) -> np.ndarray:
    """
    -M^-1 applied to every page of the Inner-Term.

    DTM solves all n^2 columns against one Cholesky factor (passed in or
    built from the CRBA mass matrix); AZA runs ABA with zero velocity and
    zero gravity once per column.

    Raises:
        FactorizationError: If the mass matrix cannot be factored
    """
    n = model.n
    _check_tensor(inner, n, "inner")
    columns = np.reshape(inner, (n, n * n), order='F')
    method = 'cholesky' if strategy == OuterStrategy.DTM else 'aba'
    solved = minv_apply(model, q, columns, method, factor=factor)
    return np.reshape(-solved, (n, n, n), order='F')


def dminv_dq(model: Model, q, M_inv: np.ndarray, dM_dq: np.ndarray) -> np.ndarray:
    """
    Derivative of the inverse mass matrix: page c is -M^-1 (dM/dq_c) M^-1.

    Also the cross derivative d2FD / dtau dq.
    """
    n = model.n
    _check_tensor(dM_dq, n, "dM_dq")
    if M_inv.shape != (n, n):
        raise ShapeMismatchError(f"M_inv must be {n}x{n}, got {M_inv.shape}")
    out = -pagewise_matmul(matmul_pagewise(M_inv, dM_dq), M_inv)
    return 0.5 * (out + transpose_T(out))


class ForwardDynamicsSOService:
    """Computes second-order FD derivative bundles under a strategy configuration"""

    def __init__(self, config: Optional[StrategyConfig] = None):
        self.config = config or StrategyConfig(
            inner_crossover_n=settings.inner_crossover_n,
            outer_crossover_n=settings.outer_crossover_n,
        )

    def compute(self, model: Model, q, qd, tau, config: Optional[StrategyConfig] = None) -> DerivBundleSO_FD:
        """
        Full second-order FD bundle at (q, qd, tau).

        qdd0 = aba(q, qd, tau); one kinematics cache at qdd0 feeds both the
        first-order FD pass and the ID second-order pass, and the Cholesky
        factor of M from the first-order pass serves every Outer-Term solve.
        Stage timings of the call are returned on the bundle.
        """
        config = config or self.config
        inner_strategy, outer_strategy = config.resolve(model.N)
        logger.debug(f"fdsva_so N={model.N}: inner={inner_strategy.value}, outer={outer_strategy.value}")
        q = normalize_configs(model, q)
        timings: Dict[str, float] = {}

        start = time.perf_counter()
        cache = compute_kinematics_cache(model, q, qd, aba(model, q, qd, tau))
        fo = fd_fo_from_cache(model, cache)
        id_so = idsva_so_from_cache(model, cache)
        timings['id_so'] = time.perf_counter() - start

        start = time.perf_counter()
        inner = {pair: inner_term(pair, id_so, fo, inner_strategy, model, q)
                 for pair in ('qq', 'qdqd', 'qqd')}
        timings['inner'] = time.perf_counter() - start

        start = time.perf_counter()
        outer = {pair: outer_term(value, model, q, outer_strategy, fo.mass_factor)
                 for pair, value in inner.items()}
        timings['outer'] = time.perf_counter() - start

        start = time.perf_counter()
        bundle = DerivBundleSO_FD(
            d2fd_dq2=outer['qq'],
            d2fd_dqd2=outer['qdqd'],
            d2fd_dq_dqd=outer['qqd'],
            d2fd_dqd_dq=transpose_R(outer['qqd']),
            dminv_dq=dminv_dq(model, q, fo.M_inv, id_so.dM_dq),
            qdd=fo.qdd,
        )
        timings['other'] = time.perf_counter() - start
        bundle.timings = timings
        return bundle


# Global service instance
fd_so_service = ForwardDynamicsSOService()


def fdsva_so(model: Model, q, qd, tau, cfg: Optional[StrategyConfig] = None) -> DerivBundleSO_FD:
    """Second-order partial derivatives of forward dynamics with the global service"""
    return fd_so_service.compute(model, q, qd, tau, cfg)
