"""
Shared assertions for numerical tests
"""

import numpy as np
from numpy.testing import assert_allclose


def magnitude(expected) -> float:
    """max(1, max |expected|)"""
    values = np.abs(np.asarray(expected))
    return max(1.0, float(values.max())) if values.size else 1.0


def assert_close(actual, expected, atol: float, rtol: float = 0.0, err_msg: str = '') -> None:
    """assert_allclose with atol scaled by the magnitude of the expected values"""
    assert_allclose(actual, expected, rtol=rtol, atol=atol * magnitude(expected), err_msg=err_msg)
