"""
SO(3) / SE(3) exponential and logarithm maps

Closed-form Rodrigues formulas serve real inputs. Inputs carrying
bi-complex scalars go through a truncated power series instead, which keeps
the map analytic in the perturbation.
"""

import logging

import numpy as np
from scipy.linalg import polar

from .spatial_algebra import hat, skew, unskew

logger = logging.getLogger(__name__)

# Terms of the matrix-exponential series used for non-real scalars
SERIES_TERMS = 12

# Below this angle the Rodrigues coefficients switch to Taylor expansions
SMALL_ANGLE = 1e-6


def expm_series(A: np.ndarray, terms: int = SERIES_TERMS) -> np.ndarray:
    """Truncated series sum_{k < terms} A^k / k!, generic over the scalar type"""
    n = A.shape[0]
    dtype = object if A.dtype == object else float
    result = np.eye(n, dtype=dtype)
    term = np.eye(n, dtype=dtype)
    for k in range(1, terms):
        term = (term @ A) / k
        result = result + term
    return result


def _rodrigues_coefficients(theta: float):
    """(sin t / t, (1 - cos t) / t^2, (t - sin t) / t^3) with small-angle expansions"""
    if theta < SMALL_ANGLE:
        t2 = theta * theta
        return 1.0 - t2 / 6.0, 0.5 - t2 / 24.0, 1.0 / 6.0 - t2 / 120.0
    s, c = np.sin(theta), np.cos(theta)
    return s / theta, (1.0 - c) / theta ** 2, (theta - s) / theta ** 3


def exp_so3(w) -> np.ndarray:
    """Rotation matrix exp([w x])"""
    w = np.asarray(w)
    if w.dtype == object:
        return expm_series(skew(w))
    W = skew(w).astype(float)
    a, b, _ = _rodrigues_coefficients(float(np.linalg.norm(w)))
    return np.eye(3) + a * W + b * (W @ W)


def log_so3(R) -> np.ndarray:
    """Rotation vector w with exp_so3(w) = R and |w| <= pi"""
    R = np.asarray(R, dtype=float)
    cos_theta = np.clip(0.5 * (np.trace(R) - 1.0), -1.0, 1.0)
    theta = float(np.arccos(cos_theta))
    if theta < SMALL_ANGLE:
        return 0.5 * unskew(R - R.T)
    if np.pi - theta < 1e-6:
        # Axis from the dominant column of (R + I) / 2 = a a^T
        B = 0.5 * (R + np.eye(3))
        k = int(np.argmax(np.diag(B)))
        axis = B[:, k] / np.linalg.norm(B[:, k])
        if np.dot(unskew(R - R.T), axis) < 0:
            axis = -axis
        return theta * axis
    return theta / (2.0 * np.sin(theta)) * unskew(R - R.T)


def exp_se3(xi) -> np.ndarray:
    """Homogeneous transform exp(hat(xi)) for a motion vector xi = (w, v)"""
    xi = np.asarray(xi)
    if xi.dtype == object:
        return expm_series(hat(xi))
    w, v = xi[:3].astype(float), xi[3:].astype(float)
    W = skew(w).astype(float)
    a, b, c = _rodrigues_coefficients(float(np.linalg.norm(w)))
    W2 = W @ W
    T = np.eye(4)
    T[:3, :3] = np.eye(3) + a * W + b * W2
    T[:3, 3] = (np.eye(3) + b * W + c * W2) @ v
    return T


def log_se3(T) -> np.ndarray:
    """Motion vector xi with exp_se3(xi) = T"""
    T = np.asarray(T, dtype=float)
    w = log_so3(T[:3, :3])
    W = skew(w).astype(float)
    theta = float(np.linalg.norm(w))
    if theta < SMALL_ANGLE:
        coeff = 1.0 / 12.0
    else:
        coeff = (1.0 - theta * np.sin(theta) / (2.0 * (1.0 - np.cos(theta)))) / theta ** 2
    V_inv = np.eye(3) - 0.5 * W + coeff * (W @ W)
    return np.concatenate([w, V_inv @ T[:3, 3]])


def orthonormality_error(R) -> float:
    """max |R^T R - I|"""
    R = np.asarray(R, dtype=float)
    return float(np.max(np.abs(R.T @ R - np.eye(3))))


def project_to_so3(R) -> np.ndarray:
    """Closest rotation in the Frobenius sense, via the polar decomposition"""
    U, _ = polar(np.asarray(R, dtype=float))
    if np.linalg.det(U) < 0:
        U = -U
    return U


def renormalize(R, tol: float) -> np.ndarray:
    """Re-project R onto SO(3) when its orthonormality drift exceeds tol"""
    error = orthonormality_error(R)
    if error > tol:
        logger.debug(f"Re-normalising rotation with orthonormality error {error:.3e}")
        return project_to_so3(R)
    return R


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Rotation exp_so3(w) for w uniform in [-pi, pi]^3"""
    return exp_so3(rng.uniform(-np.pi, np.pi, 3))
