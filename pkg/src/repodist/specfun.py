"""Special functions used by the distribution catalog.

All functions accept a scalar or an array.  A scalar argument returns a
Python ``float``; array arguments broadcast and return ``ndarray``.
Non-finite inputs and out-of-domain arguments raise
:class:`~repodist.errors.DomainError` rather than propagating NaN.

The numerical work happens in the kernel backend chosen by
:mod:`repodist._backend`.
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError

__all__ = [
    "Accuracy",
    "DEFAULT_ACCURACY",
    "erf",
    "erfc",
    "erfcx",
    "erf_inv",
    "erfc_inv",
    "log_gamma",
    "reg_gamma_p",
    "reg_gamma_q",
    "reg_beta_i",
]


@dataclass(frozen=True)
class Accuracy:
    """Convergence controls for the iterative functions."""

    abs_tol: float = 1e-16
    max_iter: int = 100_000

    def __post_init__(self):
        if not (self.abs_tol > 0):
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_ACCURACY = Accuracy()


def _prepare(name, *args):
    arrays = [np.asarray(a, dtype=np.float64) for a in args]
    scalar = all(a.ndim == 0 for a in arrays)
    arrays = np.broadcast_arrays(*arrays)
    shape = arrays[0].shape
    flat = [np.ascontiguousarray(a.ravel()) for a in arrays]
    for a in flat:
        if not np.all(np.isfinite(a)):
            raise DomainError(f"{name}: non-finite argument")
    return scalar, shape, flat


def _finish(scalar, shape, out):
    if scalar:
        return float(out[0])
    return out.reshape(shape)


def erf(z):
    """Error function ``2/sqrt(pi) * int_0^z exp(-t^2) dt``."""
    scalar, shape, (z,) = _prepare("erf", z)
    return _finish(scalar, shape, _backend.kernels.erf(z))


def erfc(z):
    """Complementary error function ``1 - erf(z)``, accurate in the right tail."""
    scalar, shape, (z,) = _prepare("erfc", z)
    return _finish(scalar, shape, _backend.kernels.erfc(z))


def erfcx(z):
    """Scaled complementary error function ``exp(z^2) * erfc(z)``."""
    scalar, shape, (z,) = _prepare("erfcx", z)
    return _finish(scalar, shape, _backend.kernels.erfcx(z))


def erf_inv(q):
    """Inverse error function on ``(-1, 1)``.

    A rational starting approximation is polished by Halley/Newton steps
    on ``erf`` (on ``erfc`` for ``|q| > 0.5``), so the round trip
    ``erf(erf_inv(q))`` is exact to a few ulps.
    """
    scalar, shape, (q,) = _prepare("erf_inv", q)
    if np.any(np.abs(q) >= 1.0):
        raise DomainError("erf_inv: argument must satisfy -1 < q < 1")
    return _finish(scalar, shape, _backend.kernels.erfinv(q))


def erfc_inv(y):
    """Inverse complementary error function on ``(0, 2)``.

    Keeps full relative precision for tiny ``y``, where ``erf_inv(1 - y)``
    would lose it to cancellation.
    """
    scalar, shape, (y,) = _prepare("erfc_inv", y)
    if np.any(y <= 0.0) or np.any(y >= 2.0):
        raise DomainError("erfc_inv: argument must satisfy 0 < y < 2")
    return _finish(scalar, shape, _backend.kernels.erfcinv(y))


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    scalar, shape, (x,) = _prepare("log_gamma", x)
    if np.any(x <= 0.0):
        raise DomainError("log_gamma: argument must be positive")
    return _finish(scalar, shape, _backend.kernels.lgamma(x))


def reg_gamma_p(a, x, accuracy=DEFAULT_ACCURACY):
    """Regularized lower incomplete gamma ``P(a, x)``.

    Series expansion below ``x = a + 1``, Lentz continued fraction above.
    """
    scalar, shape, (a, x) = _prepare("reg_gamma_p", a, x)
    if np.any(a <= 0.0) or np.any(x < 0.0):
        raise DomainError("reg_gamma_p: need a > 0 and x >= 0")
    out = _backend.kernels.gammainc_p(a, x, accuracy.abs_tol, accuracy.max_iter)
    return _finish(scalar, shape, out)


def reg_gamma_q(a, x, accuracy=DEFAULT_ACCURACY):
    """Regularized upper incomplete gamma ``Q(a, x) = 1 - P(a, x)``."""
    scalar, shape, (a, x) = _prepare("reg_gamma_q", a, x)
    if np.any(a <= 0.0) or np.any(x < 0.0):
        raise DomainError("reg_gamma_q: need a > 0 and x >= 0")
    out = _backend.kernels.gammainc_q(a, x, accuracy.abs_tol, accuracy.max_iter)
    return _finish(scalar, shape, out)


def reg_beta_i(x, a, b, accuracy=DEFAULT_ACCURACY):
    """Regularized incomplete beta ``I_x(a, b)`` by continued fraction."""
    scalar, shape, (x, a, b) = _prepare("reg_beta_i", x, a, b)
    if np.any(x < 0.0) or np.any(x > 1.0) or np.any(a <= 0.0) or np.any(b <= 0.0):
        raise DomainError("reg_beta_i: need 0 <= x <= 1, a > 0, b > 0")
    out = _backend.kernels.betainc(x, a, b, accuracy.abs_tol, accuracy.max_iter)
    return _finish(scalar, shape, out)
