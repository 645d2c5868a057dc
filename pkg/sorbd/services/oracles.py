"""
Oracle Service
Reference derivatives for verification and accuracy studies:

- bi-complex step over RNEA/ABA (first and second order, no subtractive
  cancellation, accurate to machine precision)
- Finite-Diff-1: central differences of RNEA/ABA for second derivatives
- Finite-Diff-2: central differences of the analytical first derivatives

Every oracle perturbs joint configurations with integrate_config, i.e. by
right multiplication with exp(E eps), so multi-DoF derivatives are the same
Lie derivatives the analytical algorithms compute. Second-order tensors use
the (row, column, page) convention of the derivative bundles: element
[i, a, b] differentiates output i along column variable a first and page
variable b second.
"""

import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..config import settings
from ..models.bundles import DerivBundleSO_FD, DerivBundleSO_ID
from ..models.model import Model, State
from ..models.schemas import StepConfig
from ..utils.bicomplex import BiComplex, component
from ..utils.tensor_algebra import new_tensor, transpose_R
from .dynamics import aba, normalize_configs, rnea
from .first_order import fd_fo, idsva_fo
from .joints import perturb_configs

logger = logging.getLogger(__name__)

ORACLE_FUNCTIONS = ('rnea', 'aba')

# Input variables of each dynamics function (the last one is the fourth argument)
VARIABLES = {
    'rnea': ('q', 'qd', 'qdd'),
    'aba': ('q', 'qd', 'tau'),
}

# Bundle field -> (column variable, page variable)
ID_PAIRS = {
    'd2tau_dq2': ('q', 'q'),
    'd2tau_dqd2': ('qd', 'qd'),
    'd2tau_dq_dqd': ('qd', 'q'),
    'dM_dq': ('qdd', 'q'),
}

FD_PAIRS = {
    'd2fd_dq2': ('q', 'q'),
    'd2fd_dqd2': ('qd', 'qd'),
    'd2fd_dq_dqd': ('qd', 'q'),
    'dminv_dq': ('tau', 'q'),
}


def _check_function(fn: str, *variables: str) -> None:
    if fn not in ORACLE_FUNCTIONS:
        raise ValueError(f"Unknown dynamics function: {fn}. Available: {list(ORACLE_FUNCTIONS)}")
    for var in variables:
        if var not in VARIABLES[fn]:
            raise ValueError(f"{fn} has no input '{var}'. Available: {list(VARIABLES[fn])}")


def _inputs(model: Model, state: State, fn: str) -> Dict[str, object]:
    last = VARIABLES[fn][2]
    value = getattr(state, last)
    return {
        'q': normalize_configs(model, state.q),
        'qd': np.asarray(state.qd, dtype=float),
        last: np.zeros(model.n) if value is None else np.asarray(value, dtype=float),
    }


def _perturb(model: Model, inputs: Dict[str, object], var: str, direction: np.ndarray) -> Dict[str, object]:
    """Copy of inputs with var moved along direction (right perturbation for q)"""
    out = dict(inputs)
    if var == 'q':
        out['q'] = perturb_configs(model, inputs['q'], direction)
    else:
        out[var] = inputs[var] + direction
    return out


def _evaluate(model: Model, fn: str, inputs: Dict[str, object]) -> np.ndarray:
    if fn == 'rnea':
        return rnea(model, inputs['q'], inputs['qd'], inputs['qdd'])
    return aba(model, inputs['q'], inputs['qd'], inputs['tau'])


def _unit(n: int, index: int, scale: float) -> np.ndarray:
    e = np.zeros(n)
    e[index] = scale
    return e


# -- bi-complex step -------------------------------------------------------------

def complex_step_second(f: Callable, x, a: int, b: int, h: Optional[float] = None):
    """
    Second partial d2f / dx_a dx_b of a scalar-generic function by the
    bi-complex step: Im12(f(x + i1 h e_a + i2 h e_b)) / h^2.
    """
    h = settings.bicomplex_step if h is None else h
    x = np.atleast_1d(np.asarray(x, dtype=float))
    point = np.empty(x.shape, dtype=object)
    for l, value in enumerate(x):
        point[l] = BiComplex.from_parts(value, h if l == a else 0.0, h if l == b else 0.0)
    value = component(f(point), 'im12') / (h * h)
    return float(value) if value.ndim == 0 else value


def bicomplex_fo(model: Model, state: State, fn: str = 'rnea', var: str = 'q',
                 h: Optional[float] = None) -> np.ndarray:
    """
    First-order Jacobian d fn / d var as Im1(fn(x + i1 h e_a)) / h.

    All n directions run in one batched evaluation: the i1 part of each
    perturbed input is an n-vector over the batch.
    """
    _check_function(fn, var)
    h = settings.bicomplex_step if h is None else h
    n = model.n
    batch = np.arange(n)
    direction = np.empty(n, dtype=object)
    for l in range(n):
        direction[l] = BiComplex(1j * h * (batch == l), 0.0)
    inputs = _perturb(model, _inputs(model, state, fn), var, direction)
    return component(_evaluate(model, fn, inputs), 'im1', (n,)) / h


def bicomplex_so(model: Model, state: State, fn: str = 'rnea', col_var: str = 'q',
                 page_var: str = 'q', h: Optional[float] = None) -> np.ndarray:
    """
    Second-order tensor d2 fn / d col_var d page_var by the bi-complex step.

    Batch element (a, b) carries i1 h along column direction a and i2 h
    along page direction b, so a single RNEA/ABA evaluation over BiComplex
    scalars yields all n^2 pairs. Configurations are perturbed along the
    page direction first and the column direction second.

    Returns:
        n x n x n tensor, [i, a, b] = Im12(fn)_i / h^2 for pair (a, b)
    """
    _check_function(fn, col_var, page_var)
    h = settings.bicomplex_step if h is None else h
    n = model.n
    A, B = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    col_direction = np.empty(n, dtype=object)
    page_direction = np.empty(n, dtype=object)
    for l in range(n):
        col_direction[l] = BiComplex(1j * h * (A == l), 0.0)
        page_direction[l] = BiComplex(0.0, h * (B == l))

    inputs = _inputs(model, state, fn)
    inputs = _perturb(model, inputs, page_var, page_direction)
    inputs = _perturb(model, inputs, col_var, col_direction)
    out = component(_evaluate(model, fn, inputs), 'im12', (n, n)) / (h * h)
    logger.debug(f"bicomplex_so {fn} ({col_var}, {page_var}) for n={n}")
    return np.asfortranarray(out)


# -- Finite-Diff-1 -----------------------------------------------------------------

def finite_diff1_so(model: Model, state: State, fn: str = 'rnea', col_var: str = 'q',
                    page_var: str = 'q', cfg: Optional[StepConfig] = None) -> np.ndarray:
    """
    Second-order tensor by central differences of fn.

    Diagonal entries (same variable, same index) use
    (f(x + h e) - 2 f(x) + f(x - h e)) / h^2; all others the four-point
    stencil over 4 h k with h on the column and k on the page variable.
    """
    _check_function(fn, col_var, page_var)
    h, k = (cfg or StepConfig(h=settings.fd1_step)).steps
    n = model.n
    inputs = _inputs(model, state, fn)
    center = _evaluate(model, fn, inputs)
    out = new_tensor(n, n, n)

    for b in range(n):
        shifted = {sk: _perturb(model, inputs, page_var, _unit(n, b, sk * k)) for sk in (1.0, -1.0)}
        for a in range(n):
            if col_var == page_var and a == b:
                plus = _evaluate(model, fn, _perturb(model, inputs, col_var, _unit(n, a, h)))
                minus = _evaluate(model, fn, _perturb(model, inputs, col_var, _unit(n, a, -h)))
                out[:, a, b] = (plus - 2.0 * center + minus) / (h * h)
                continue
            total = np.zeros(n)
            for sk in (1.0, -1.0):
                for sh in (1.0, -1.0):
                    value = _evaluate(model, fn, _perturb(model, shifted[sk], col_var, _unit(n, a, sh * h)))
                    total += sh * sk * value
            out[:, a, b] = total / (4.0 * h * k)
    return out


# -- Finite-Diff-2 -----------------------------------------------------------------

def _first_order_blocks(model: Model, fn: str, inputs: Dict[str, object]) -> Dict[str, np.ndarray]:
    """Analytical Jacobians keyed by variable name"""
    if fn == 'rnea':
        bundle = idsva_fo(model, inputs['q'], inputs['qd'], inputs['qdd'])
        return {'q': bundle.dtau_dq, 'qd': bundle.dtau_dqd, 'qdd': bundle.dtau_dqdd}
    bundle = fd_fo(model, inputs['q'], inputs['qd'], inputs['tau'])
    return {'q': bundle.dfd_dq, 'qd': bundle.dfd_dqd, 'tau': bundle.dfd_dtau}


def finite_diff2_so(model: Model, state: State, fn: str = 'rnea', h: Optional[float] = None):
    """
    Second-order bundle by central differences of the analytical first
    derivatives (idsva_fo for RNEA, fd_fo for ABA) along each page
    variable: (J(x + h e_b) - J(x - h e_b)) / 2h.

    Returns:
        DerivBundleSO_ID for 'rnea', DerivBundleSO_FD for 'aba'
    """
    _check_function(fn)
    h = settings.fd2_step if h is None else h
    n = model.n
    pairs = ID_PAIRS if fn == 'rnea' else FD_PAIRS
    tensors = {name: new_tensor(n, n, n) for name in pairs}
    inputs = _inputs(model, state, fn)

    for page_var in ('q', 'qd'):
        wanted = {name: col for name, (col, page) in pairs.items() if page == page_var}
        for b in range(n):
            plus = _first_order_blocks(model, fn, _perturb(model, inputs, page_var, _unit(n, b, h)))
            minus = _first_order_blocks(model, fn, _perturb(model, inputs, page_var, _unit(n, b, -h)))
            for name, col_var in wanted.items():
                tensors[name][:, :, b] = (plus[col_var] - minus[col_var]) / (2.0 * h)
    return _bundle(fn, tensors)


# -- bundles -------------------------------------------------------------------------

def _bundle(fn: str, tensors: Dict[str, np.ndarray]):
    if fn == 'rnea':
        return DerivBundleSO_ID(**tensors)
    return DerivBundleSO_FD(d2fd_dqd_dq=transpose_R(tensors['d2fd_dq_dqd']), **tensors)


def bicomplex_bundle(model: Model, state: State, fn: str = 'rnea', h: Optional[float] = None):
    """All second-order tensors of fn by the bi-complex step"""
    _check_function(fn)
    pairs = ID_PAIRS if fn == 'rnea' else FD_PAIRS
    tensors = {name: bicomplex_so(model, state, fn, col, page, h) for name, (col, page) in pairs.items()}
    return _bundle(fn, tensors)


def finite_diff1_bundle(model: Model, state: State, fn: str = 'rnea', cfg: Optional[StepConfig] = None):
    """All second-order tensors of fn by Finite-Diff-1"""
    _check_function(fn)
    pairs = ID_PAIRS if fn == 'rnea' else FD_PAIRS
    tensors = {name: finite_diff1_so(model, state, fn, col, page, cfg) for name, (col, page) in pairs.items()}
    return _bundle(fn, tensors)


def bundle_tensors(bundle) -> Tuple[np.ndarray, ...]:
    """The independent tensors of a bundle in a fixed order, for error reports"""
    if isinstance(bundle, DerivBundleSO_ID):
        return tuple(getattr(bundle, name) for name in ID_PAIRS)
    return tuple(getattr(bundle, name) for name in FD_PAIRS)
