"""
Bi-complex numbers for second-order complex-step differentiation

A bi-complex number a + i1*b + i2*c + i1*i2*d is stored as a pair of
ordinary complex numbers z = z1 + i2*z2 with z1 = a + i1*b, z2 = c + i1*d,
where i1 plays the role of Python's imaginary unit. The components may be
complex scalars or complex arrays of a common batch shape, so a single
dynamics evaluation can carry many independent perturbations at once.

Numpy object arrays of BiComplex values work with matmul and elementwise
arithmetic; the module-level sin/cos/exp/sqrt helpers dispatch between
BiComplex and real inputs.
"""

from functools import wraps
from typing import Any, Tuple

import numpy as np

from ..models.errors import UnsupportedOperationError


def _elementwise(method):
    """
    Apply a binary operator entry by entry when the other operand is a
    non-scalar array. Arrays are structural (vectors, matrices); only the
    components of a BiComplex carry the batch axis.
    """
    @wraps(method)
    def wrapper(self, other):
        if isinstance(other, np.ndarray) and other.ndim > 0:
            out = np.empty(other.shape, dtype=object)
            for idx, x in np.ndenumerate(other):
                out[idx] = method(self, x)
            return out
        return method(self, other)
    return wrapper


class BiComplex:
    """
    Element of the commutative ring C[i1, i2] with i1^2 = i2^2 = -1.

    Only analytic operations are provided. Comparisons and abs() raise
    UnsupportedOperationError since they would break the complex-step
    derivative extraction.
    """

    __slots__ = ('z1', 'z2')

    # Make numpy defer binary operators to the reflected methods below
    __array_ufunc__ = None

    def __init__(self, z1: Any, z2: Any = 0.0):
        self.z1 = z1
        self.z2 = z2

    @classmethod
    def from_parts(cls, re=0.0, im1=0.0, im2=0.0, im12=0.0) -> "BiComplex":
        """Build from the four real components a, b, c, d"""
        return cls(re + 1j * np.asarray(im1), im2 + 1j * np.asarray(im12))

    # -- components ---------------------------------------------------------

    @property
    def re(self):
        return np.real(self.z1)

    @property
    def im1(self):
        return np.imag(self.z1)

    @property
    def im2(self):
        return np.real(self.z2)

    @property
    def im12(self):
        return np.imag(self.z2)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Tuple[Any, Any]:
        if isinstance(other, BiComplex):
            return other.z1, other.z2
        if isinstance(other, (int, float, complex, np.number, np.ndarray)):
            return other, 0.0
        return None

    @_elementwise
    def __add__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(self.z1 + parts[0], self.z2 + parts[1])

    __radd__ = __add__

    @_elementwise
    def __sub__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(self.z1 - parts[0], self.z2 - parts[1])

    @_elementwise
    def __rsub__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(parts[0] - self.z1, parts[1] - self.z2)

    @_elementwise
    def __mul__(self, other):
        if isinstance(other, BiComplex):
            return BiComplex(self.z1 * other.z1 - self.z2 * other.z2,
                             self.z1 * other.z2 + self.z2 * other.z1)
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(self.z1 * other, self.z2 * other)

    __rmul__ = __mul__

    @_elementwise
    def __truediv__(self, other):
        if isinstance(other, BiComplex):
            # z / w = z * (w1 - i2 w2) / (w1^2 + w2^2)
            denom = other.z1 * other.z1 + other.z2 * other.z2
            if np.any(denom == 0):
                raise ZeroDivisionError("bi-complex division by a zero divisor")
            num = self * BiComplex(other.z1, -other.z2)
            return BiComplex(num.z1 / denom, num.z2 / denom)
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(self.z1 / other, self.z2 / other)

    @_elementwise
    def __rtruediv__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return BiComplex(parts[0], parts[1]) / self

    def __neg__(self):
        return BiComplex(-self.z1, -self.z2)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, (int, np.integer)):
            raise UnsupportedOperationError("bi-complex powers are limited to integer exponents")
        if exponent < 0:
            return 1.0 / (self ** (-exponent))
        result = BiComplex(1.0 + 0j * self.z1, 0.0 * self.z2)
        for _ in range(int(exponent)):
            result = result * self
        return result

    # -- analytic functions -------------------------------------------------

    def sin(self) -> "BiComplex":
        return BiComplex(np.sin(self.z1) * np.cosh(self.z2), np.cos(self.z1) * np.sinh(self.z2))

    def cos(self) -> "BiComplex":
        return BiComplex(np.cos(self.z1) * np.cosh(self.z2), -np.sin(self.z1) * np.sinh(self.z2))

    def exp(self) -> "BiComplex":
        scale = np.exp(self.z1)
        return BiComplex(scale * np.cos(self.z2), scale * np.sin(self.z2))

    def sqrt(self) -> "BiComplex":
        # z = rho (cos phi + i2 sin phi) with rho = z1 sqrt(1 + t^2), phi = atan(t), t = z2 / z1
        if np.any(self.z1 == 0):
            raise UnsupportedOperationError("bi-complex sqrt is not analytic at a zero real part")
        t = self.z2 / self.z1
        half_phi = 0.5 * np.arctan(t)
        scale = np.sqrt(self.z1) * (1.0 + t * t) ** 0.25
        return BiComplex(scale * np.cos(half_phi), scale * np.sin(half_phi))

    # -- non-analytic operations -------------------------------------------

    def _unsupported(self, *args):
        raise UnsupportedOperationError("comparisons and abs() are not analytic for bi-complex numbers")

    __lt__ = __le__ = __gt__ = __ge__ = __abs__ = _unsupported

    def __eq__(self, other):
        parts = self._coerce(other)
        if parts is None:
            return NotImplemented
        return bool(np.all(self.z1 == parts[0]) and np.all(self.z2 == parts[1]))

    __hash__ = None

    def __repr__(self) -> str:
        return f"BiComplex(re={self.re}, im1={self.im1}, im2={self.im2}, im12={self.im12})"


# Imaginary units
I1 = BiComplex(1j, 0.0)
I2 = BiComplex(0.0, 1.0)


def is_bicomplex(x) -> bool:
    """True when x is a BiComplex or an object array that may hold them"""
    if isinstance(x, BiComplex):
        return True
    return isinstance(x, np.ndarray) and x.dtype == object


def scalar_dtype(*values) -> type:
    """Return object when any input carries bi-complex scalars, else float"""
    for value in values:
        if value is None:
            continue
        if is_bicomplex(value):
            return object
        if isinstance(value, (list, tuple)) and any(is_bicomplex(v) for v in value):
            return object
    return float


def sin(x):
    return x.sin() if isinstance(x, BiComplex) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, BiComplex) else np.cos(x)


def exp(x):
    return x.exp() if isinstance(x, BiComplex) else np.exp(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, BiComplex) else np.sqrt(x)


def component(values, name: str, batch_shape: Tuple[int, ...] = ()) -> np.ndarray:
    """
    Extract one real component from a (possibly object) array.

    Args:
        values: Array or scalar holding BiComplex and/or real entries
        name: One of 're', 'im1', 'im2', 'im12'
        batch_shape: Shape of the component arrays carried by the entries

    Returns:
        Float array of shape values.shape + batch_shape. Real entries
        contribute to 're' only.
    """
    if name not in ('re', 'im1', 'im2', 'im12'):
        raise ValueError(f"Unknown component: {name}")
    values = np.asarray(values, dtype=object)
    out = np.zeros(values.shape + tuple(batch_shape))
    for idx, x in np.ndenumerate(values):
        if isinstance(x, BiComplex):
            out[idx] = getattr(x, name)
        elif name == 're':
            out[idx] = x
    return out
