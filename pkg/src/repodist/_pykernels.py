"""Pure-Python special-function kernels.

Mirror of ``_ckernels.pyx``: same algorithms, same constants, same
iteration rules, so both backends agree to rounding.  Every public
function takes float64 arrays (already broadcast and flattened by the
caller) and returns a new float64 array.
"""
import math

import numpy as np

NAME = "python"

_SQRT_PI = 1.7724538509055160273
_TWO_OVER_SQRT_PI = 1.1283791670955125739
_HALF_LOG_2PI = 0.91893853320467274178
_EPS = 2.220446049250313e-16
_TINY = 1e-300

# erf series / continued-fraction switchover
_ERF_SPLIT = 3.0

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Acklam's rational approximation to the standard normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _erf_series(x):
    # erf(x) = 2/sqrt(pi) * x * exp(-x^2) * sum (2x^2)^n / (2n+1)!!, all terms positive
    x2 = 2.0 * x * x
    term = 1.0
    total = 1.0
    n = 0
    while True:
        n += 1
        term *= x2 / (2 * n + 1)
        total += term
        if term < _EPS * 0.5 * total or n > 500:
            break
    return _TWO_OVER_SQRT_PI * x * math.exp(-x * x) * total


def _erfc_cf(x):
    # 1 / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz, x > 0
    f = x
    c = x
    d = 0.0
    for n in range(1, 5000):
        an = 0.5 * n
        d = x + an * d
        if abs(d) < _TINY:
            d = _TINY
        c = x + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return 1.0 / (_SQRT_PI * f)


def erf_scalar(x):
    if x < 0.0:
        return -erf_scalar(-x)
    if x == 0.0:
        return 0.0
    if x < _ERF_SPLIT:
        return _erf_series(x)
    return 1.0 - math.exp(-x * x) * _erfc_cf(x)


def erfc_scalar(x):
    if x < 0.0:
        return 2.0 - erfc_scalar(-x)
    if x < _ERF_SPLIT:
        return 1.0 - erf_scalar(x)
    return math.exp(-x * x) * _erfc_cf(x)


def erfcx_scalar(x):
    if x < _ERF_SPLIT:
        return math.exp(x * x) * erfc_scalar(x)
    return _erfc_cf(x)


def _ndtri_acklam(p, tail):
    # p: lower probability; tail: 1 - p computed without cancellation
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if tail < _P_LOW:
        q = math.sqrt(-2.0 * math.log(tail))
        return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                 / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


def erfinv_scalar(q):
    if q == 0.0:
        return 0.0
    if q < 0.0:
        return -erfinv_scalar(-q)
    if q >= 1.0:
        return math.inf if q == 1.0 else math.nan
    tail = 1.0 - q  # exact for q >= 0.5
    x = _ndtri_acklam(0.5 + 0.5 * q, 0.5 * tail) / math.sqrt(2.0)
    for _ in range(3):
        # residual in the better-conditioned complement when q is large
        if q > 0.5:
            r = tail - erfc_scalar(x)
        else:
            r = erf_scalar(x) - q
        deriv = _TWO_OVER_SQRT_PI * math.exp(-x * x)
        step = r / deriv
        # Halley correction: f'' = -2x f'
        x -= step / (1.0 + x * step)
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def erfcinv_scalar(y):
    # inverse of erfc on (0, 2); the y < 1 branch never forms 1 - y
    if y == 1.0:
        return 0.0
    if y > 1.0:
        return -erfinv_scalar(y - 1.0)
    if y >= 0.5:
        return erfinv_scalar(1.0 - y)
    if y <= 0.0:
        return math.inf if y == 0.0 else math.nan
    x = -_ndtri_acklam(0.5 * y, 1.0 - 0.5 * y) / math.sqrt(2.0)
    for _ in range(3):
        r = erfc_scalar(x) - y
        deriv = _TWO_OVER_SQRT_PI * math.exp(-x * x)
        step = -r / deriv
        x -= step / (1.0 + x * step)
        if abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return x


def _stirling_corr(x):
    # lgamma(x) - [(x - 0.5) log x - x + log sqrt(2 pi)], valid for x >= 10
    inv = 1.0 / x
    inv2 = inv * inv
    return inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (
        -1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0 + inv2 / 156.0))))))


def lgamma_scalar(x):
    if x < 0.5:
        return lgamma_scalar(x + 1.0) - math.log(x)
    if x >= 10.0:
        return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + _stirling_corr(x)
    z = x - 1.0
    a = _LANCZOS[0]
    for i in range(1, 9):
        a += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(a)


def _gamma_prefactor(a, x):
    # x^a e^-x / Gamma(a); for large a the log is regrouped around x/a - 1
    # so the big terms of a log x and lgamma(a) never cancel
    if a >= 10.0:
        d = (x - a) / a
        return math.exp(a * (math.log1p(d) - d) + 0.5 * math.log(a) - _HALF_LOG_2PI - _stirling_corr(a))
    return math.exp(a * math.log(x) - x - lgamma_scalar(a))


def _gamma_series(a, x, tol, max_iter):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * tol:
            break
    return total * _gamma_prefactor(a, x)


def _gamma_cf(a, x, tol, max_iter):
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            break
    return h * _gamma_prefactor(a, x)


def gammainc_p_scalar(a, x, tol, max_iter):
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x, tol, max_iter))
    return max(0.0, 1.0 - _gamma_cf(a, x, tol, max_iter))


def gammainc_q_scalar(a, x, tol, max_iter):
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x, tol, max_iter))
    return min(1.0, _gamma_cf(a, x, tol, max_iter))


def _betacf(a, b, x, tol, max_iter):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            break
    return h


def _log_beta(a, b):
    # log B(a, b) without cancelling large lgamma values
    p, q = min(a, b), max(a, b)
    if q < 10.0:
        return lgamma_scalar(p) + lgamma_scalar(q) - lgamma_scalar(p + q)
    if p >= 10.0:
        corr = _stirling_corr(p) + _stirling_corr(q) - _stirling_corr(p + q)
        return (-0.5 * math.log(q) + _HALF_LOG_2PI + corr
                + (p - 0.5) * math.log(p / (p + q)) + q * math.log1p(-p / (p + q)))
    corr = _stirling_corr(q) - _stirling_corr(p + q)
    return lgamma_scalar(p) + corr + p - p * math.log(p + q) + (q - 0.5) * math.log1p(-p / (p + q))


def betainc_scalar(x, a, b, tol, max_iter):
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _betacf(a, b, x, tol, max_iter) / a)
    return max(0.0, 1.0 - front * _betacf(b, a, 1.0 - x, tol, max_iter) / b)


def _map1(fn, x):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        out[i] = fn(float(x[i]))
    return out


def erf(x):
    return _map1(erf_scalar, x)


def erfc(x):
    return _map1(erfc_scalar, x)


def erfcx(x):
    return _map1(erfcx_scalar, x)


def erfinv(q):
    return _map1(erfinv_scalar, q)


def erfcinv(y):
    return _map1(erfcinv_scalar, y)


def lgamma(x):
    return _map1(lgamma_scalar, x)


def gammainc_p(a, x, tol, max_iter):
    out = np.empty(a.shape[0], dtype=np.float64)
    for i in range(a.shape[0]):
        out[i] = gammainc_p_scalar(float(a[i]), float(x[i]), tol, max_iter)
    return out


def gammainc_q(a, x, tol, max_iter):
    out = np.empty(a.shape[0], dtype=np.float64)
    for i in range(a.shape[0]):
        out[i] = gammainc_q_scalar(float(a[i]), float(x[i]), tol, max_iter)
    return out


def betainc(x, a, b, tol, max_iter):
    out = np.empty(x.shape[0], dtype=np.float64)
    for i in range(x.shape[0]):
        out[i] = betainc_scalar(float(x[i]), float(a[i]), float(b[i]), tol, max_iter)
    return out
