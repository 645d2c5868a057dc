"""
Third-order tensor algebra for spatial matrices

A Tensor3 is a numpy array of shape (rows, columns, pages). Rows index the
function output, columns the first derivative variable and pages the
second. Tensors are allocated in Fortran order so that every page
A[:, :, k] is one contiguous block (page stride rows * columns).

Spatial matrices are plain 6 x n arrays whose columns are all motion or all
force vectors; n = 0 is legal and yields empty tensors.

The tensor products accumulate over the contracted index in ascending
order, which makes them agree exactly with a naive triple loop.
"""

import numpy as np

from ..models.errors import ShapeMismatchError
from .spatial_algebra import cross_force, cross_motion, crossbar_star


def new_tensor(rows: int, cols: int, pages: int, dtype=float) -> np.ndarray:
    """Zero tensor with page-contiguous storage"""
    return np.zeros((rows, cols, pages), dtype=dtype, order='F')


def _spatial_matrix(U) -> np.ndarray:
    U = np.asarray(U)
    if U.ndim == 1:
        U = U.reshape(6, 1)
    if U.ndim != 2 or U.shape[0] != 6:
        raise ShapeMismatchError(f"spatial matrix must be 6 x n, got {U.shape}")
    return U


def _pagewise(op, U) -> np.ndarray:
    U = _spatial_matrix(U)
    out = new_tensor(6, 6, U.shape[1], dtype=U.dtype if U.dtype == object else float)
    for k in range(U.shape[1]):
        out[:, :, k] = op(U[:, k])
    return out


def cross_tilde(U) -> np.ndarray:
    """U x~ : page k is cross_motion(U[:, k])"""
    return _pagewise(cross_motion, U)


def cross_tilde_star(U) -> np.ndarray:
    """U x~* : page k is cross_force(U[:, k])"""
    return _pagewise(cross_force, U)


def crossbar_tilde_star(F) -> np.ndarray:
    """F xbar~* : page k is crossbar_star(F[:, k])"""
    return _pagewise(crossbar_star, F)


def tensor_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """
    Tensor-matrix product Z_ijk = sum_l A_ilk B_lj.

    Args:
        A: Tensor of shape (d1, m, d3)
        B: Matrix of shape (m, d2)

    Returns:
        Tensor of shape (d1, d2, d3)

    Raises:
        ShapeMismatchError: If the inner dimensions differ
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 3 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeMismatchError(f"cannot contract tensor {A.shape} with matrix {B.shape}")
    dtype = object if object in (A.dtype, B.dtype) else np.result_type(A, B)
    Z = new_tensor(A.shape[0], B.shape[1], A.shape[2], dtype=dtype)
    for l in range(A.shape[1]):
        Z += A[:, l, None, :] * B[l, None, :, None]
    return Z


def matmul_tensor(B: np.ndarray, A: np.ndarray) -> np.ndarray:
    """
    Matrix-tensor product Y_ijk = sum_l B_il A_ljk.

    Args:
        B: Matrix of shape (n1, n2)
        A: Tensor of shape (n2, n3, n4)

    Returns:
        Tensor of shape (n1, n3, n4)
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 3 or B.ndim != 2 or B.shape[1] != A.shape[0]:
        raise ShapeMismatchError(f"cannot contract matrix {B.shape} with tensor {A.shape}")
    dtype = object if object in (A.dtype, B.dtype) else np.result_type(A, B)
    Y = new_tensor(B.shape[0], A.shape[1], A.shape[2], dtype=dtype)
    for l in range(B.shape[1]):
        Y += B[:, l, None, None] * A[l, None, :, :]
    return Y


def transpose_T(A: np.ndarray) -> np.ndarray:
    """T~ transpose: out[j, i, k] = A[i, j, k]"""
    return np.asfortranarray(np.transpose(A, (1, 0, 2)))


def transpose_R(A: np.ndarray) -> np.ndarray:
    """R~ transpose: out[i, k, j] = A[i, j, k]"""
    return np.asfortranarray(np.transpose(A, (0, 2, 1)))


def transpose_RT(A: np.ndarray) -> np.ndarray:
    """R~ after T~: out[k, i, j] = A[i, j, k]"""
    return np.asfortranarray(np.transpose(A, (2, 0, 1)))


def body_coriolis_tensor(I: np.ndarray, V) -> np.ndarray:
    """
    Two-argument body-Coriolis tensor B~(I, V).

    Page k equals body_coriolis(I, V[:, k]), computed as
    1/2 [(V x~*) I - I (V x~) + (I V) xbar~*].
    """
    I = np.asarray(I)
    if I.shape != (6, 6):
        raise ShapeMismatchError(f"spatial inertia must be 6x6, got {I.shape}")
    V = _spatial_matrix(V)
    first = pagewise_matmul(cross_tilde_star(V), I)
    second = matmul_pagewise(I, cross_tilde(V))
    third = crossbar_tilde_star(I @ V)
    return 0.5 * (first - second + third)


def pagewise_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Page-by-page product A[:, :, k] @ B"""
    dtype = object if object in (A.dtype, B.dtype) else float
    out = new_tensor(A.shape[0], B.shape[1], A.shape[2], dtype=dtype)
    for k in range(A.shape[2]):
        out[:, :, k] = A[:, :, k] @ B
    return out


def matmul_pagewise(B: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Page-by-page product B @ A[:, :, k]"""
    dtype = object if object in (A.dtype, B.dtype) else float
    out = new_tensor(B.shape[0], A.shape[1], A.shape[2], dtype=dtype)
    for k in range(A.shape[2]):
        out[:, :, k] = B @ A[:, :, k]
    return out


def cross_tilde_vector(U, v) -> np.ndarray:
    """
    U x~ v: the 6 x 1 x n tensor whose page k is cross_motion(U[:, k]) @ v.

    Equals -(v x) U laid out as a tensor.
    """
    U = _spatial_matrix(U)
    out = new_tensor(6, 1, U.shape[1], dtype=U.dtype if U.dtype == object else float)
    out[:, 0, :] = -(cross_motion(v) @ U)
    return out
