# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled special-function kernels.

Line-for-line port of ``_pykernels``; keep the two in sync.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, sqrt, fabs, INFINITY, NAN

cnp.import_array()

NAME = "cython"

cdef double SQRT_PI = 1.7724538509055160273
cdef double TWO_OVER_SQRT_PI = 1.1283791670955125739
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double EPS = 2.220446049250313e-16
cdef double TINY = 1e-300
cdef double ERF_SPLIT = 3.0
cdef double LANCZOS_G = 7.0
cdef double[9] LANCZOS = [
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7]
cdef double[6] A = [-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
                    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00]
cdef double[5] B = [-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
                    6.680131188771972e01, -1.328068155288572e01]
cdef double[6] C = [-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
                    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00]
cdef double[4] D = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
                    3.754408661907416e00]
cdef double P_LOW = 0.02425


cdef inline double _erf_series(double x) nogil:
    cdef double x2 = 2.0 * x * x
    cdef double term = 1.0
    cdef double total = 1.0
    cdef int n = 0
    while True:
        n += 1
        term *= x2 / (2 * n + 1)
        total += term
        if term < EPS * 0.5 * total or n > 500:
            break
    return TWO_OVER_SQRT_PI * x * exp(-x * x) * total


cdef inline double _erfc_cf(double x) nogil:
    cdef double f = x
    cdef double c = x
    cdef double d = 0.0
    cdef double an, delta
    cdef int n
    for n in range(1, 5000):
        an = 0.5 * n
        d = x + an * d
        if fabs(d) < TINY:
            d = TINY
        c = x + an / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return 1.0 / (SQRT_PI * f)


cdef double erf_scalar(double x) nogil:
    if x < 0.0:
        return -erf_scalar(-x)
    if x == 0.0:
        return 0.0
    if x < ERF_SPLIT:
        return _erf_series(x)
    return 1.0 - exp(-x * x) * _erfc_cf(x)


cdef double erfc_scalar(double x) nogil:
    if x < 0.0:
        return 2.0 - erfc_scalar(-x)
    if x < ERF_SPLIT:
        return 1.0 - erf_scalar(x)
    return exp(-x * x) * _erfc_cf(x)


cdef double erfcx_scalar(double x) nogil:
    if x < ERF_SPLIT:
        return exp(x * x) * erfc_scalar(x)
    return _erfc_cf(x)


cdef double _ndtri_acklam(double p, double tail) nogil:
    cdef double q, r
    if p < P_LOW:
        q = sqrt(-2.0 * log(p))
        return ((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
                / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    if tail < P_LOW:
        q = sqrt(-2.0 * log(tail))
        return -((((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
                 / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0))


cdef double erfinv_scalar(double q) nogil:
    cdef double tail, x, r, deriv, step
    cdef int it
    if q == 0.0:
        return 0.0
    if q < 0.0:
        return -erfinv_scalar(-q)
    if q >= 1.0:
        return INFINITY if q == 1.0 else NAN
    tail = 1.0 - q
    x = _ndtri_acklam(0.5 + 0.5 * q, 0.5 * tail) / sqrt(2.0)
    for it in range(3):
        if q > 0.5:
            r = tail - erfc_scalar(x)
        else:
            r = erf_scalar(x) - q
        deriv = TWO_OVER_SQRT_PI * exp(-x * x)
        step = r / deriv
        x -= step / (1.0 + x * step)
        if fabs(step) <= 1e-17 * (fabs(x) if fabs(x) > 1.0 else 1.0):
            break
    return x


cdef double erfcinv_scalar(double y) nogil:
    cdef double x, r, deriv, step
    cdef int it
    if y == 1.0:
        return 0.0
    if y > 1.0:
        return -erfinv_scalar(y - 1.0)
    if y >= 0.5:
        return erfinv_scalar(1.0 - y)
    if y <= 0.0:
        return INFINITY if y == 0.0 else NAN
    x = -_ndtri_acklam(0.5 * y, 1.0 - 0.5 * y) / sqrt(2.0)
    for it in range(3):
        r = erfc_scalar(x) - y
        deriv = TWO_OVER_SQRT_PI * exp(-x * x)
        step = -r / deriv
        x -= step / (1.0 + x * step)
        if fabs(step) <= 1e-17 * (fabs(x) if fabs(x) > 1.0 else 1.0):
            break
    return x


cdef inline double _stirling_corr(double x) nogil:
    # lgamma(x) - [(x - 0.5) log x - x + log sqrt(2 pi)], valid for x >= 10
    cdef double inv = 1.0 / x
    cdef double inv2 = inv * inv
    return inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (
        -1.0 / 1680.0 + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0 + inv2 / 156.0))))))


cdef double lgamma_scalar(double x) nogil:
    cdef double z, a, t
    cdef int i
    if x < 0.5:
        return lgamma_scalar(x + 1.0) - log(x)
    if x >= 10.0:
        return (x - 0.5) * log(x) - x + HALF_LOG_2PI + _stirling_corr(x)
    z = x - 1.0
    a = LANCZOS[0]
    for i in range(1, 9):
        a += LANCZOS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * log(t) - t + log(a)


cdef inline double _gamma_prefactor(double a, double x) nogil:
    # x^a e^-x / Gamma(a); for large a the log is regrouped around x/a - 1
    # so the big terms of a log x and lgamma(a) never cancel
    cdef double d
    if a >= 10.0:
        d = (x - a) / a
        return exp(a * (log1p(d) - d) + 0.5 * log(a) - HALF_LOG_2PI - _stirling_corr(a))
    return exp(a * log(x) - x - lgamma_scalar(a))


cdef double _gamma_series(double a, double x, double tol, long max_iter) nogil:
    cdef double ap = a
    cdef double term = 1.0 / a
    cdef double total = term
    cdef long i
    for i in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if fabs(term) < fabs(total) * tol:
            break
    return total * _gamma_prefactor(a, x)


cdef double _gamma_cf(double a, double x, double tol, long max_iter) nogil:
    cdef double b = x + 1.0 - a
    cdef double c = 1.0 / TINY
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta
    cdef long i
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < TINY:
            d = TINY
        c = b + an / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < tol:
            break
    return h * _gamma_prefactor(a, x)


cdef double gammainc_p_scalar(double a, double x, double tol, long max_iter) nogil:
    cdef double v
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        v = _gamma_series(a, x, tol, max_iter)
        return 1.0 if v > 1.0 else v
    v = 1.0 - _gamma_cf(a, x, tol, max_iter)
    return 0.0 if v < 0.0 else v


cdef double gammainc_q_scalar(double a, double x, double tol, long max_iter) nogil:
    cdef double v
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        v = 1.0 - _gamma_series(a, x, tol, max_iter)
        return 0.0 if v < 0.0 else v
    v = _gamma_cf(a, x, tol, max_iter)
    return 1.0 if v > 1.0 else v


cdef double _betacf(double a, double b, double x, double tol, long max_iter) nogil:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef long m, m2
    if fabs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if fabs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < tol:
            break
    return h


cdef double _log_beta(double a, double b) nogil:
    # log B(a, b) without cancelling large lgamma values
    cdef double p = a if a < b else b
    cdef double q = b if a < b else a
    cdef double corr
    if q < 10.0:
        return lgamma_scalar(p) + lgamma_scalar(q) - lgamma_scalar(p + q)
    if p >= 10.0:
        corr = _stirling_corr(p) + _stirling_corr(q) - _stirling_corr(p + q)
        return (-0.5 * log(q) + HALF_LOG_2PI + corr
                + (p - 0.5) * log(p / (p + q)) + q * log1p(-p / (p + q)))
    corr = _stirling_corr(q) - _stirling_corr(p + q)
    return lgamma_scalar(p) + corr + p - p * log(p + q) + (q - 0.5) * log1p(-p / (p + q))


cdef double betainc_scalar(double x, double a, double b, double tol, long max_iter) nogil:
    cdef double front, v
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = exp(a * log(x) + b * log1p(-x) - _log_beta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        v = front * _betacf(a, b, x, tol, max_iter) / a
        return 1.0 if v > 1.0 else v
    v = 1.0 - front * _betacf(b, a, 1.0 - x, tol, max_iter) / b
    return 0.0 if v < 0.0 else v


def erf(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erf_scalar(x[i])
    return out


def erfc(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfc_scalar(x[i])
    return out


def erfcx(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfcx_scalar(x[i])
    return out


def erfinv(const double[::1] q):
    cdef Py_ssize_t i, n = q.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfinv_scalar(q[i])
    return out


def erfcinv(const double[::1] y):
    cdef Py_ssize_t i, n = y.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfcinv_scalar(y[i])
    return out


def lgamma(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = lgamma_scalar(x[i])
    return out


def gammainc_p(const double[::1] a, const double[::1] x, double tol, long max_iter):
    cdef Py_ssize_t i, n = a.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = gammainc_p_scalar(a[i], x[i], tol, max_iter)
    return out


def gammainc_q(const double[::1] a, const double[::1] x, double tol, long max_iter):
    cdef Py_ssize_t i, n = a.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = gammainc_q_scalar(a[i], x[i], tol, max_iter)
    return out


def betainc(const double[::1] x, const double[::1] a, const double[::1] b,
            double tol, long max_iter):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = betainc_scalar(x[i], a[i], b[i], tol, max_iter)
    return out
