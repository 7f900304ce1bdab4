import math

import mpmath
import numpy as np
import pytest

from repodist import _backend, specfun
from repodist.errors import DomainError

mpmath.mp.dps = 40


def rel_err(got, want):
    return abs(got - want) / max(abs(want), 1e-300)


def test_erf_known_values(backend):
    assert specfun.erf(0.0) == 0.0
    assert specfun.erf(0.5) == pytest.approx(0.5204998778130465, abs=1e-15)
    assert specfun.erf(-2.0) == pytest.approx(-0.9953222650189527, abs=1e-15)
    assert specfun.erf(10.0) == 1.0


def test_erf_matches_mpmath(backend):
    for x in np.linspace(-6, 6, 241):
        assert abs(specfun.erf(x) - float(mpmath.erf(x))) <= 1e-15


def test_erfc_relative_accuracy_in_tail(backend):
    for x in [0.1, 1.0, 2.9, 3.0, 3.1, 5.0, 10.0, 26.0]:
        assert rel_err(specfun.erfc(x), float(mpmath.erfc(x))) < 1e-10


def test_erfcx_large_argument(backend):
    for x in [0.5, 3.0, 10.0, 100.0, 1e4]:
        want = float(mpmath.exp(mpmath.mpf(x) ** 2) * mpmath.erfc(x))
        assert rel_err(specfun.erfcx(x), want) < 1e-10


def test_erf_inv_round_trip(backend):
    q = np.linspace(-0.999999, 0.999999, 501)
    assert np.max(np.abs(specfun.erf(specfun.erf_inv(q)) - q)) < 1e-14


def test_erf_inv_matches_mpmath(backend):
    for q in [-0.9, -0.3, 0.001, 0.5, 0.99]:
        assert rel_err(specfun.erf_inv(q), float(mpmath.erfinv(q))) < 1e-12


def test_erfc_inv_tiny_arguments(backend):
    for y in [1e-300, 1e-100, 1e-20, 1e-5, 0.3, 1.0, 1.7, 2 - 1e-12]:
        x = specfun.erfc_inv(y)
        assert rel_err(specfun.erfc(x), y) < 1e-10


def test_log_gamma_matches_mpmath(backend):
    for x in [1e-8, 0.1, 0.5, 1.0, 1.5, 2.0, 7.3, 10.0, 55.5, 1e3, 1e8]:
        assert abs(specfun.log_gamma(x) - float(mpmath.loggamma(x))) < 1e-12 * max(1.0, abs(float(mpmath.loggamma(x))))


def test_log_gamma_integer_factorials(backend):
    for n in range(1, 30):
        assert specfun.log_gamma(n + 1.0) == pytest.approx(math.lgamma(n + 1.0), rel=1e-14, abs=1e-14)


def test_reg_gamma_p_and_q(backend):
    for a in [0.1, 0.5, 1.0, 3.7, 20.0, 150.0]:
        for x in [0.0, 0.01, 0.5 * a, a, a + 1, 2 * a + 5]:
            want = float(mpmath.gammainc(a, 0, x, regularized=True))
            assert abs(specfun.reg_gamma_p(a, x) - want) < 1e-13
            assert abs(specfun.reg_gamma_q(a, x) - (1 - want)) < 1e-13


def test_reg_gamma_exponential_special_case(backend):
    x = np.linspace(0, 20, 50)
    assert np.allclose(specfun.reg_gamma_p(1.0, x), -np.expm1(-x), atol=1e-15)


def test_reg_beta_matches_mpmath(backend):
    for a, b in [(0.5, 0.5), (1.0, 1.0), (2.2, 6.8), (30.0, 2.0), (1e3, 5.0)]:
        for x in [0.0, 0.01, 0.3, 0.5, 0.9, 1.0]:
            want = float(mpmath.betainc(a, b, 0, x, regularized=True))
            assert abs(specfun.reg_beta_i(x, a, b) - want) < 1e-13


def test_reg_beta_symmetry(backend):
    x, a, b = 0.37, 2.5, 4.25
    assert specfun.reg_beta_i(x, a, b) + specfun.reg_beta_i(1 - x, b, a) == pytest.approx(1.0, abs=1e-15)


def test_scalar_in_float_out_and_broadcasting():
    assert isinstance(specfun.erf(0.3), float)
    out = specfun.reg_gamma_p(np.array([[1.0], [2.0]]), np.array([0.5, 1.0, 2.0]))
    assert out.shape == (2, 3)


@pytest.mark.parametrize("call", [
    lambda: specfun.erf(float("nan")),
    lambda: specfun.erf_inv(1.0),
    lambda: specfun.erfc_inv(0.0),
    lambda: specfun.log_gamma(0.0),
    lambda: specfun.reg_gamma_p(0.0, 1.0),
    lambda: specfun.reg_gamma_q(1.0, -1.0),
    lambda: specfun.reg_beta_i(1.5, 1.0, 1.0),
    lambda: specfun.reg_beta_i(0.5, -1.0, 1.0),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_accuracy_validation():
    with pytest.raises(ValueError):
        specfun.Accuracy(abs_tol=0.0)
    with pytest.raises(ValueError):
        specfun.Accuracy(max_iter=0)


def test_loose_accuracy_is_honoured():
    loose = specfun.Accuracy(abs_tol=1e-4, max_iter=1000)
    assert specfun.reg_gamma_p(3.0, 2.0, loose) == pytest.approx(specfun.reg_gamma_p(3.0, 2.0), abs=1e-4)


@pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled kernels not built")
def test_backends_agree():
    x = np.linspace(-5, 5, 401)
    a = np.linspace(0.1, 40, 401)
    pos = np.abs(x) + 0.01
    results = {}
    for name in _backend.available():
        with _backend.using(name):
            results[name] = [specfun.erf(x), specfun.erfc(x), specfun.erfcx(x), specfun.log_gamma(pos),
                             specfun.reg_gamma_p(a, pos), specfun.reg_beta_i(pos / 5.1, a, a[::-1]),
                             specfun.erf_inv(x / 5.01)]
    for c, p in zip(results["cython"], results["python"]):
        assert np.allclose(c, p, rtol=1e-14, atol=1e-300)


def test_backend_switching():
    previous = _backend.name()
    with _backend.using("python"):
        assert _backend.name() == "python"
    assert _backend.name() == previous
    with pytest.raises(ValueError):
        _backend.use("fortran")


def erf_series(z):
    # Maclaurin series, summed until terms vanish
    with mpmath.workdps(60):
        z = mpmath.mpf(z)
        total, n = mpmath.mpf(0), 0
        while True:
            term = (-1) ** n * z ** (2 * n + 1) / (mpmath.factorial(n) * (2 * n + 1))
            total += term
            if abs(term) < mpmath.mpf(10) ** -50:
                break
            n += 1
        return float(2 / mpmath.sqrt(mpmath.pi) * total)


def test_documented_examples(backend):
    assert specfun.erf(1.0) == pytest.approx(erf_series(1.0), abs=1e-15)
    assert specfun.erf(1.0) == pytest.approx(0.842700792, abs=1e-9)
    for z in (0.1, 1.0, 3.0):
        assert specfun.erf(-z) == -specfun.erf(z)
    assert specfun.erf_inv(0.0) == 0.0
    assert specfun.erf_inv(erf_series(1.0)) == pytest.approx(1.0, abs=1e-9)
    assert abs(specfun.erf(specfun.erf_inv(0.999999)) - 0.999999) < 1e-10
    assert specfun.log_gamma(1.0) == 0.0
    assert specfun.log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-14)
    assert specfun.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)
    for x in (0.5, 1.0, 2.0):
        assert specfun.reg_gamma_p(1.0, x) == pytest.approx(1 - math.exp(-x), abs=1e-15)
    assert specfun.reg_gamma_p(2.5, 0.0) == 0.0
    for a in (1.0, 2.0, 7.0):
        assert specfun.reg_beta_i(0.5, a, a) == pytest.approx(0.5, abs=1e-14)
    assert specfun.reg_beta_i(0.0, 2.0, 3.0) == 0.0
    assert specfun.reg_beta_i(1.0, 2.0, 3.0) == 1.0


def test_quadrature_oracles(backend):
    from scipy import integrate

    num, _ = integrate.quad(lambda t: t ** 1.5 * math.exp(-t), 0, 3.0, epsabs=1e-13, epsrel=1e-13)
    assert abs(specfun.reg_gamma_p(2.5, 3.0) - num / math.gamma(2.5)) < 1e-10
    num, _ = integrate.quad(lambda t: t * (1 - t) ** 4, 0, 0.3, epsabs=1e-14, epsrel=1e-14)
    assert abs(specfun.reg_beta_i(0.3, 2.0, 5.0) - num * 30.0) < 1e-10


def test_monotone_in_x(backend):
    x = np.linspace(0, 40, 4001)
    for a in (0.3, 1.0, 5.0, 25.0):
        assert np.min(np.diff(specfun.reg_gamma_p(a, x))) >= -1e-14
    u = np.linspace(0, 1, 4001)
    for a, b in ((0.5, 0.5), (2.0, 5.0), (30.0, 3.0)):
        assert np.min(np.diff(specfun.reg_beta_i(u, a, b))) >= -1e-14


def test_log_gamma_recurrence(backend):
    x = np.linspace(0.5, 100, 2000)
    assert np.max(np.abs(specfun.log_gamma(x + 1) - specfun.log_gamma(x) - np.log(x))) <= 1e-11


def test_python_fallback_selected_without_extension():
    import subprocess
    import sys

    code = ("import sys; sys.modules['repodist._ckernels'] = None\n"
            "import repodist, repodist.specfun as s\n"
            "print(repodist.backend_name(), s.erf(1.0))")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True).stdout.split()
    assert out[0] == "python" and float(out[1]) == pytest.approx(0.8427007929497149, abs=1e-15)
