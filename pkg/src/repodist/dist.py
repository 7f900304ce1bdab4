"""Distribution catalog.

Eight families, each a :class:`Family` tag plus a parameter tuple.
Continuous families follow the ``(shape, loc, scale)`` convention used by
the published commit-count fits: ``loc`` shifts the support to
``x > loc`` and ``scale`` stretches it.  ``Exponential`` has no shape.
The discrete families are Poisson ``(lambda,)`` and the negative
binomial in the ``(size, mu)`` parameterization.

>>> d = Distribution.from_tuple("Exponential", (-0.83, 0.83))
>>> round(d.density(-0.83), 4)
1.2048
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, EmptySampleError, ParameterError

__all__ = [
    "Family",
    "Distribution",
    "density",
    "cdf",
    "quantile",
    "sample",
    "log_likelihood",
    "uniforms",
    "NB_DIRECT_SIZE",
]

_SQRT2 = math.sqrt(2.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

#: negative-binomial ``size`` above which the CDF sums the PMF directly;
#: the incomplete-beta route loses digits once r/(r+mu) rounds close to 1
NB_DIRECT_SIZE = 1e4

_ROOT_TOL = 1e-12


class Family(enum.Enum):
    """Distribution family tag.  Declaration order is the tie-break order."""

    LOGNORMAL = "LogNormal"
    EXPONENTIAL = "Exponential"
    WEIBULL_MIN = "WeibullMin"
    GAMMA = "Gamma"
    INVERSE_GAUSSIAN = "InverseGaussian"
    NORMAL = "Normal"
    POISSON = "Poisson"
    NEG_BINOMIAL = "NegBinomial"

    @property
    def discrete(self):
        return self in (Family.POISSON, Family.NEG_BINOMIAL)

    @property
    def param_names(self):
        return _PARAM_NAMES[self]

    @property
    def n_params(self):
        return len(_PARAM_NAMES[self])

    @property
    def order(self):
        return list(Family).index(self)

    @classmethod
    def parse(cls, value):
        """Accept a Family, its value, its name, or a common alias."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "").replace(" ", "")
        key = key.replace(".", "")
        try:
            return _ALIASES[key]
        except KeyError:
            raise ParameterError(f"unknown distribution family {value!r}") from None


_PARAM_NAMES = {
    Family.LOGNORMAL: ("shape", "loc", "scale"),
    Family.EXPONENTIAL: ("loc", "scale"),
    Family.WEIBULL_MIN: ("shape", "loc", "scale"),
    Family.GAMMA: ("shape", "loc", "scale"),
    Family.INVERSE_GAUSSIAN: ("shape", "loc", "scale"),
    Family.NORMAL: ("mean", "sd"),
    Family.POISSON: ("lam",),
    Family.NEG_BINOMIAL: ("size", "mu"),
}

_ALIASES = {}
for _f in Family:
    _ALIASES[_f.value.lower()] = _f
    _ALIASES[_f.name.lower().replace("_", "")] = _f
_ALIASES.update({
    "lognorm": Family.LOGNORMAL,
    "expon": Family.EXPONENTIAL,
    "weibull": Family.WEIBULL_MIN,
    "weibullmin": Family.WEIBULL_MIN,
    "invgauss": Family.INVERSE_GAUSSIAN,
    "invgaussian": Family.INVERSE_GAUSSIAN,
    "norm": Family.NORMAL,
    "nbinom": Family.NEG_BINOMIAL,
    "nbinomial": Family.NEG_BINOMIAL,
    "negativebinomial": Family.NEG_BINOMIAL,
})


def uniforms(rng, n):
    """Draw ``n`` uniforms strictly inside ``(0, 1)`` from ``rng``.

    ``rng`` is anything with a numpy-style ``random(size)`` method.  Exact
    zeros are redrawn so every value has a finite quantile.
    """
    u = np.asarray(rng.random(n), dtype=np.float64).reshape(-1)
    bad = u <= 0.0
    while np.any(bad):
        u[bad] = np.asarray(rng.random(int(bad.sum())), dtype=np.float64).reshape(-1)
        bad = u <= 0.0
    if np.any(u >= 1.0):
        raise DomainError("uniform stream produced a value >= 1")
    return u


def _norm_cdf(z):
    return 0.5 * specfun.erfc(-z / _SQRT2)


def _norm_sf(z):
    return 0.5 * specfun.erfc(z / _SQRT2)


def _norm_ppf(u):
    # lower tail through erfc_inv(2u), upper through erfc_inv(2(1-u)), both without cancellation
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    low = u < 0.5
    out[low] = -_SQRT2 * specfun.erfc_inv(2.0 * u[low])
    out[~low] = _SQRT2 * specfun.erfc_inv(2.0 * (1.0 - u[~low]))
    return out


def _norm_isf(s):
    return -_norm_ppf(s)


@dataclass(frozen=True)
class Distribution:
    """An immutable (family, parameters) pair.

    Parameters are validated at construction; an invalid set raises
    :class:`~repodist.errors.ParameterError`.  ``values`` follows the
    family's ``param_names`` order, which is also the printed table order.
    """

    family: Family
    values: tuple

    def __post_init__(self):
        fam = Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != fam.n_params:
            raise ParameterError(
                f"{fam.value} takes {fam.n_params} parameters {fam.param_names}, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError(f"{fam.value}: parameters must be finite")
        p = dict(zip(fam.param_names, vals))
        for name in ("shape", "scale", "sd", "lam", "size", "mu"):
            if name in p and not p[name] > 0:
                raise ParameterError(f"{fam.value}: {name} must be > 0, got {p[name]}")

    # construction helpers -------------------------------------------------

    @classmethod
    def from_tuple(cls, family, values):
        return cls(Family.parse(family), tuple(values))

    @classmethod
    def from_dict(cls, record):
        fam = Family.parse(record["family"])
        params = record["params"]
        if isinstance(params, dict):
            missing = [n for n in fam.param_names if n not in params]
            if missing:
                raise ParameterError(f"{fam.value}: missing parameters {missing}")
            return cls(fam, tuple(params[n] for n in fam.param_names))
        return cls(fam, tuple(params))

    def to_dict(self):
        return {"family": self.family.value, "params": self.params}

    @property
    def params(self):
        return dict(zip(self.family.param_names, self.values))

    def __getattr__(self, name):
        # named parameter access: d.scale, d.mu, ...
        if name in ("family", "values"):
            raise AttributeError(name)
        names = _PARAM_NAMES.get(object.__getattribute__(self, "family"), ())
        if name in names:
            return object.__getattribute__(self, "values")[names.index(name)]
        raise AttributeError(name)

    def __repr__(self):
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family.value}({args})"

    @property
    def discrete(self):
        return self.family.discrete

    @property
    def lower_bound(self):
        """Infimum of the support."""
        if self.family is Family.NORMAL:
            return -math.inf
        if self.family.discrete:
            return 0.0
        return self.values[self.family.param_names.index("loc")]

    @property
    def mean(self):
        f, p = self.family, self.params
        if f is Family.LOGNORMAL:
            return p["loc"] + p["scale"] * math.exp(0.5 * p["shape"] ** 2)
        if f is Family.EXPONENTIAL:
            return p["loc"] + p["scale"]
        if f is Family.WEIBULL_MIN:
            return p["loc"] + p["scale"] * math.gamma(1.0 + 1.0 / p["shape"])
        if f is Family.GAMMA:
            return p["loc"] + p["shape"] * p["scale"]
        if f is Family.INVERSE_GAUSSIAN:
            return p["loc"] + p["shape"] * p["scale"]
        if f is Family.NORMAL:
            return p["mean"]
        if f is Family.POISSON:
            return p["lam"]
        return p["mu"]

    @property
    def variance(self):
        f, p = self.family, self.params
        if f is Family.LOGNORMAL:
            s2 = p["shape"] ** 2
            return p["scale"] ** 2 * math.expm1(s2) * math.exp(s2)
        if f is Family.EXPONENTIAL:
            return p["scale"] ** 2
        if f is Family.WEIBULL_MIN:
            c = p["shape"]
            g1 = math.gamma(1.0 + 1.0 / c)
            return p["scale"] ** 2 * (math.gamma(1.0 + 2.0 / c) - g1 * g1)
        if f is Family.GAMMA:
            return p["shape"] * p["scale"] ** 2
        if f is Family.INVERSE_GAUSSIAN:
            return p["shape"] ** 3 * p["scale"] ** 2
        if f is Family.NORMAL:
            return p["sd"] ** 2
        if f is Family.POISSON:
            return p["lam"]
        return p["mu"] + p["mu"] ** 2 / p["size"]

    # densities ------------------------------------------------------------

    def logpdf(self, x):
        """Log density (log PMF for discrete families); ``-inf`` off support."""
        x = np.asarray(x, dtype=np.float64)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.full(x.shape, -np.inf)
        f, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if f is Family.NORMAL:
                z = (x - p["mean"]) / p["sd"]
                out = -0.5 * z * z - math.log(p["sd"]) - _HALF_LOG_2PI
            elif f.discrete:
                ok = (x >= 0) & (x == np.floor(x)) & np.isfinite(x)
                if np.any(ok):
                    out[ok] = self._discrete_logpmf(x[ok])
            else:
                loc, scale = p["loc"], p["scale"]
                y = (x - loc) / scale
                ok = (y >= 0) if f is Family.EXPONENTIAL else (y > 0)
                ok &= np.isfinite(y)
                if np.any(ok):
                    out[ok] = self._std_logpdf(y[ok]) - math.log(scale)
        return float(out[0]) if scalar else out

    def _std_logpdf(self, y):
        f, p = self.family, self.params
        if f is Family.EXPONENTIAL:
            return -y
        if f is Family.LOGNORMAL:
            s = p["shape"]
            ly = np.log(y)
            return -ly - math.log(s) - _HALF_LOG_2PI - 0.5 * (ly / s) ** 2
        if f is Family.WEIBULL_MIN:
            c = p["shape"]
            return math.log(c) + (c - 1.0) * np.log(y) - y ** c
        if f is Family.GAMMA:
            a = p["shape"]
            return (a - 1.0) * np.log(y) - y - specfun.log_gamma(a)
        if f is Family.INVERSE_GAUSSIAN:
            m = p["shape"]
            return -0.5 * np.log(2.0 * math.pi * y ** 3) - (y - m) ** 2 / (2.0 * y * m * m)
        raise AssertionError(f)

    def _discrete_logpmf(self, k):
        p = self.params
        if self.family is Family.POISSON:
            return _poisson_logpmf(k, p["lam"])
        return _nbinom_logpmf(k, p["size"], p["mu"])

    def density(self, x):
        """PDF (continuous) or PMF (discrete); zero outside the support."""
        lp = self.logpdf(x)
        return math.exp(lp) if isinstance(lp, float) else np.exp(lp)

    # distribution functions -----------------------------------------------

    def cdf(self, x):
        return self._dist_fn(x, upper=False)

    def sf(self, x):
        """Survival function ``1 - cdf``, computed directly for tail accuracy."""
        return self._dist_fn(x, upper=True)

    def _dist_fn(self, x, upper):
        x = np.asarray(x, dtype=np.float64)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if np.any(np.isnan(x)):
            raise DomainError("cdf: NaN argument")
        f, p = self.family, self.params
        below = 1.0 if upper else 0.0
        above = 0.0 if upper else 1.0
        out = np.full(x.shape, below)
        out[np.isposinf(x)] = above
        fin = np.isfinite(x)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            if f is Family.NORMAL:
                z = (x[fin] - p["mean"]) / p["sd"]
                out[fin] = _norm_sf(z) if upper else _norm_cdf(z)
            elif f.discrete:
                k = np.floor(x[fin])
                vals = np.full(k.shape, below)
                ok = k >= 0
                if np.any(ok):
                    vals[ok] = self._discrete_cdf(k[ok], upper)
                out[fin] = vals
            else:
                y = (x[fin] - p["loc"]) / p["scale"]
                vals = np.full(y.shape, below)
                ok = y > 0
                if np.any(ok):
                    vals[ok] = self._std_cdf(y[ok], upper)
                out[fin] = vals
        out = np.clip(out, 0.0, 1.0)
        return float(out[0]) if scalar else out

    def _std_cdf(self, y, upper):
        f, p = self.family, self.params
        if f is Family.EXPONENTIAL:
            return np.exp(-y) if upper else -np.expm1(-y)
        if f is Family.LOGNORMAL:
            z = np.log(y) / p["shape"]
            return _norm_sf(z) if upper else _norm_cdf(z)
        if f is Family.WEIBULL_MIN:
            t = y ** p["shape"]
            return np.exp(-t) if upper else -np.expm1(-t)
        if f is Family.GAMMA:
            a = p["shape"]
            return specfun.reg_gamma_q(a, y) if upper else specfun.reg_gamma_p(a, y)
        if f is Family.INVERSE_GAUSSIAN:
            m = p["shape"]
            root = np.sqrt(y)
            first = (y / m - 1.0) / root
            second = (y / m + 1.0) / root
            # exp(2/m) * Phi(-second) rewritten through erfcx so nothing overflows
            tail = 0.5 * specfun.erfcx(second / _SQRT2) * np.exp(-0.5 * first * first)
            lower = _norm_cdf(first) + tail
            if upper:
                return _norm_sf(first) - tail
            return lower
        raise AssertionError(f)

    def _discrete_cdf(self, k, upper):
        p = self.params
        if self.family is Family.POISSON:
            if upper:
                return specfun.reg_gamma_p(k + 1.0, p["lam"])
            return specfun.reg_gamma_q(k + 1.0, p["lam"])
        r, mu = p["size"], p["mu"]
        if r > NB_DIRECT_SIZE:
            return self._summed_cdf(k, upper)
        if upper:
            return specfun.reg_beta_i(mu / (r + mu), k + 1.0, r)
        return specfun.reg_beta_i(r / (r + mu), r, k + 1.0)

    def _summed_cdf(self, k, upper):
        # nearly Poisson here, so the PMF is negligible beyond mean + 40 sd
        top = int(max(np.max(k), self.mean + 40.0 * math.sqrt(self.variance) + 40.0))
        pmf = np.exp(self.logpdf(np.arange(top + 1, dtype=np.float64)))
        ki = k.astype(np.int64)
        if upper:
            tail = np.concatenate((np.cumsum(pmf[::-1])[::-1], [0.0]))
            return tail[ki + 1]
        return np.cumsum(pmf)[ki]

    # inverses -------------------------------------------------------------

    def quantile(self, u):
        """Inverse CDF.  Discrete families return the smallest ``k`` with ``cdf(k) >= u``."""
        u = np.asarray(u, dtype=np.float64)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        if np.any(~(u > 0.0) | ~(u < 1.0)):
            raise DomainError("quantile: u must lie in (0, 1)")
        out = self._quantile(u, upper=False)
        return float(out[0]) if scalar else out

    def isf(self, s):
        """Inverse survival function: ``x`` with ``sf(x) = s``."""
        s = np.asarray(s, dtype=np.float64)
        scalar = s.ndim == 0
        s = np.atleast_1d(s)
        if np.any(~(s > 0.0) | ~(s < 1.0)):
            raise DomainError("isf: s must lie in (0, 1)")
        out = self._quantile(s, upper=True)
        return float(out[0]) if scalar else out

    def _quantile(self, u, upper):
        f, p = self.family, self.params
        with np.errstate(divide="ignore", over="ignore"):
            if f is Family.NORMAL:
                z = _norm_isf(u) if upper else _norm_ppf(u)
                return p["mean"] + p["sd"] * z
            if f is Family.EXPONENTIAL:
                y = -np.log(u) if upper else -np.log1p(-u)
                return p["loc"] + p["scale"] * y
            if f is Family.LOGNORMAL:
                z = _norm_isf(u) if upper else _norm_ppf(u)
                return p["loc"] + p["scale"] * np.exp(p["shape"] * z)
            if f is Family.WEIBULL_MIN:
                t = -np.log(u) if upper else -np.log1p(-u)
                return p["loc"] + p["scale"] * t ** (1.0 / p["shape"])
            if f.discrete:
                return self._discrete_quantile(u, upper)
            return self._solve_quantile(u, upper)

    def _solve_quantile(self, u, upper):
        """Safeguarded Newton/bisection on the standardized CDF (Gamma, InverseGaussian)."""
        f, p = self.family, self.params
        loc, scale = p["loc"], p["scale"]
        shape = p["shape"]

        def fn(y):
            # increasing in y: cdf - u, or u - sf
            if upper:
                return u_act - self._std_cdf(y, True)
            return self._std_cdf(y, False) - u_act

        if f is Family.GAMMA:
            z = _norm_isf(u) if upper else _norm_ppf(u)
            wh = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * math.sqrt(shape))
            start = np.where(wh > 0, shape * wh ** 3, shape * 0.5)
            start = np.maximum(start, 1e-8)
            step0 = max(shape, 1.0)
        else:
            z = _norm_isf(u) if upper else _norm_ppf(u)
            start = np.maximum(shape + z * shape ** 1.5, shape * 0.1)
            step0 = max(shape ** 1.5, shape)

        n = u.shape[0]
        lo = np.zeros(n)
        hi = start.copy()
        idx = np.arange(n)
        # bracket from above by doubling
        width = np.full(n, step0)
        active = idx
        for _ in range(2000):
            u_act = u[active]
            val = fn(hi[active])
            short = val < 0
            if not np.any(short):
                break
            sel = active[short]
            lo[sel] = hi[sel]
            hi[sel] = hi[sel] + width[sel]
            width[sel] *= 2.0
            active = sel
        x = np.clip(start, lo, hi)
        x = np.where((x <= lo) | (x >= hi), 0.5 * (lo + hi), x)
        done = np.zeros(n, dtype=bool)
        for _ in range(200):
            active = idx[~done]
            if active.size == 0:
                break
            u_act = u[active]
            xa = x[active]
            val = fn(xa)
            neg = val < 0
            lo[active[neg]] = xa[neg]
            hi[active[~neg]] = xa[~neg]
            converged = np.abs(val) <= _ROOT_TOL * u_act
            tight = (hi[active] - lo[active]) <= 4 * np.finfo(float).eps * np.maximum(np.abs(xa), 1e-300)
            dens = np.exp(self._std_logpdf(xa))
            newton = xa - val / dens
            ok = np.isfinite(newton) & (newton > lo[active]) & (newton < hi[active]) & (dens > 0)
            nxt = np.where(ok, newton, 0.5 * (lo[active] + hi[active]))
            fin = converged | tight
            x[active] = np.where(fin, xa, nxt)
            done[active[fin]] = True
        return loc + scale * x

    def _discrete_quantile(self, u, upper):
        reach = 1.0 - np.min(u) if upper else np.max(u)
        table, k = self._cdf_table(reach, upper)
        if upper:
            # smallest k with sf(k) <= s
            sf_tab = np.minimum.accumulate(table)
            idx = np.searchsorted(-sf_tab, -u, side="left")
        else:
            cum = np.maximum.accumulate(table)
            idx = np.searchsorted(cum, u, side="left")
        return k[np.minimum(idx, k.size - 1)].astype(np.float64)

    def _cdf_table(self, reach, upper):
        """CDF (or SF) evaluated on 0..K with K large enough that cdf(K) >= reach."""
        m, v = self.mean, self.variance
        kmax = int(m + 10.0 * math.sqrt(v) + 20)
        while True:
            k = np.arange(kmax + 1, dtype=np.float64)
            cdf_tab = self._discrete_cdf(k, False)
            if cdf_tab[-1] >= reach or kmax > 1e8:
                break
            kmax *= 2
        if upper:
            return self._discrete_cdf(k, True), k
        return cdf_tab, k

    # sampling and likelihood ----------------------------------------------

    def sample(self, rng, n):
        """``n`` inverse-transform draws using uniforms from ``rng``."""
        if n < 1:
            raise EmptySampleError("sample size must be >= 1")
        return self.quantile(uniforms(rng, n))

    def log_likelihood(self, xs):
        """Sum of log densities; ``-inf`` when any point has zero density."""
        xs = np.asarray(xs, dtype=np.float64).reshape(-1)
        if xs.size == 0:
            raise EmptySampleError("log-likelihood of an empty sample")
        if self.family.discrete:
            # evaluate once per distinct value
            vals, counts = np.unique(xs, return_counts=True)
            lp = self.logpdf(vals)
            if np.any(np.isneginf(lp)):
                return -math.inf
            return float(np.dot(lp, counts))
        lp = self.logpdf(xs)
        if np.any(np.isneginf(lp)):
            return -math.inf
        return float(np.sum(lp))

    def impossible_points(self, xs):
        """Number of points with zero density (the flag behind a ``-inf`` likelihood)."""
        xs = np.asarray(xs, dtype=np.float64).reshape(-1)
        return int(np.sum(np.isneginf(self.logpdf(xs))))


def _poisson_logpmf(k, lam):
    return k * math.log(lam) - lam - specfun.log_gamma(k + 1.0)


def _nbinom_logpmf(k, r, mu):
    lr = math.log1p(mu / r)
    kmax = float(np.max(k)) if k.size else 0.0
    if r > 1e4 and kmax <= 1e6:
        # lgamma(k+r) - lgamma(r) = k log r + sum_{j<k} log1p(j/r); avoids cancellation
        j = np.arange(int(kmax), dtype=np.float64)
        rising = np.concatenate(([0.0], np.cumsum(np.log1p(j / r))))
        ki = k.astype(np.int64)
        return (rising[ki] + k * (math.log(mu) - lr) - r * lr
                - specfun.log_gamma(k + 1.0))
    return (specfun.log_gamma(k + r) - specfun.log_gamma(r) - specfun.log_gamma(k + 1.0)
            - r * lr + k * (math.log(mu) - math.log(r) - lr))


# functional forms -----------------------------------------------------------

def density(d, x):
    return d.density(x)


def cdf(d, x):
    return d.cdf(x)


def quantile(d, u):
    return d.quantile(u)


def sample(d, rng, n):
    return d.sample(rng, n)


def log_likelihood(d, xs):
    return d.log_likelihood(xs)
