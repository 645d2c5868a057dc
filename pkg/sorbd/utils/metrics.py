"""
Error metrics and complexity fits

Maximum and root-mean-square absolute/relative errors of computed tensors
against a reference, and least-squares log-log fits of run time against
model size.
"""

from typing import Sequence, Union

import numpy as np

from ..models.errors import ShapeMismatchError
from ..models.schemas import ErrorReport, SlopeFit

TensorLike = Union[np.ndarray, Sequence[np.ndarray]]


def _flatten(values: TensorLike) -> np.ndarray:
    if isinstance(values, np.ndarray):
        return values.ravel()
    return np.concatenate([np.asarray(v, dtype=float).ravel() for v in values])


def error_report(A: TensorLike, A_ref: TensorLike, stacked: bool = False) -> ErrorReport:
    """
    MAE, RMSAE, MRE and RMSRE of A against A_ref.

    Relative errors divide by max(|ref|, 1) element by element. The RMS
    denominators use the element count of the compared data; for the
    stacked n x 3n x 3n inverse-dynamics tensor (stacked=True) that is 9n^3.

    Args:
        A: Tensor, or sequence of tensors compared block by block
        A_ref: Reference of the same shape(s)

    Raises:
        ShapeMismatchError: If the shapes differ, or a stacked tensor is
            not n x 3n x 3n
    """
    if isinstance(A, np.ndarray) != isinstance(A_ref, np.ndarray):
        raise ShapeMismatchError("cannot compare a tensor with a sequence of tensors")
    shapes = [np.shape(A)] if isinstance(A, np.ndarray) else [np.shape(a) for a in A]
    ref_shapes = [np.shape(A_ref)] if isinstance(A_ref, np.ndarray) else [np.shape(a) for a in A_ref]
    if shapes != ref_shapes:
        raise ShapeMismatchError(f"shape mismatch: {shapes} vs {ref_shapes}")
    if stacked:
        n = shapes[0][0] if shapes and len(shapes[0]) == 3 else -1
        if len(shapes) != 1 or shapes[0] != (n, 3 * n, 3 * n):
            raise ShapeMismatchError(f"stacked comparison expects an n x 3n x 3n tensor, got {shapes}")

    diff = np.abs(_flatten(A).astype(float) - _flatten(A_ref).astype(float))
    ref = _flatten(A_ref).astype(float)
    count = diff.size
    if count == 0:
        return ErrorReport(mae=0.0, rmsae=0.0, mre=0.0, rmsre=0.0, count=0)
    rel = diff / np.maximum(np.abs(ref), 1.0)
    return ErrorReport(
        mae=float(np.max(diff)),
        rmsae=float(np.sqrt(np.sum(diff ** 2) / count)),
        mre=float(np.max(rel)),
        rmsre=float(np.sqrt(np.sum(rel ** 2) / count)),
        count=count,
    )


def fit_loglog(sizes: Sequence[float], times: Sequence[float]) -> SlopeFit:
    """
    Least-squares fit of log t = A log N + B (natural logarithms).

    Raises:
        ValueError: If fewer than 4 points are given or any value is not positive
    """
    N = np.asarray(sizes, dtype=float)
    t = np.asarray(times, dtype=float)
    if N.shape != t.shape or N.ndim != 1:
        raise ValueError("sizes and times must be 1-D sequences of equal length")
    if N.size < 4:
        raise ValueError(f"need at least 4 points for a slope fit, got {N.size}")
    if np.any(N <= 0) or np.any(t <= 0):
        raise ValueError("sizes and times must be positive")
    x, y = np.log(N), np.log(t)
    A, B = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (A * x + B)) ** 2)))
    return SlopeFit(A=float(A), B=float(B), residual=residual, points=int(N.size))
