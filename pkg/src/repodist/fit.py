"""Maximum-likelihood fitting, goodness of fit and ranking.

Closed-form estimators are used where they exist (Normal, Poisson,
Exponential, and the mean of the negative binomial).  The remaining
parameters are found with the Nelder-Mead simplex in
:mod:`repodist.optimize`, working on unconstrained transforms
(log of positive parameters; the shift as ``min(x) - floor - range*exp(t)``).
LogNormal and InverseGaussian have closed-form maximizers once the shift
is fixed, so only the shift is searched for those two.
"""
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .dist import Distribution, Family
from .errors import (
    DegenerateSampleError,
    EmptySampleError,
    InfeasibleFitError,
    InsufficientDataError,
    NoFitError,
    UnsupportedFamilyError,
)
from .optimize import minimize_with_restarts, nelder_mead
from .series import AnalysisSeries

__all__ = [
    "Criterion",
    "MomentSummary",
    "FitResult",
    "Ranking",
    "moments",
    "standardize",
    "fit_family",
    "ks_statistic",
    "ks_distance",
    "rank_fits",
    "pp_series",
    "cdf_compare_series",
    "density_compare_series",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# shifted fits keep loc <= min(x) - LOC_FLOOR * range
LOC_FLOOR = 1e-9
XTOL = 1e-8
FTOL = 1e-10
RESTARTS = 3


class Criterion(enum.Enum):
    AIC = "AIC"
    BIC = "BIC"
    LOGLIK = "LogLik"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for c in cls:
            if c.value.lower() == key or c.name.lower() == key:
                return c
        raise ValueError(f"unknown criterion {value!r}")


@dataclass
class MomentSummary:
    """Sample moments with 1/n normalization; kurtosis is raw (Normal = 3).

    ``skewness`` and ``kurtosis`` are ``None`` when the variance is zero.
    """

    n: int
    mean: float
    variance: float
    skewness: float = None
    kurtosis: float = None

    @property
    def square_skewness(self):
        return None if self.skewness is None else self.skewness ** 2

    def to_dict(self):
        return {"n": self.n, "mean": self.mean, "variance": self.variance,
                "skewness": self.skewness, "kurtosis": self.kurtosis}


def _as_sample(xs):
    values = getattr(xs, "values", xs)
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise EmptySampleError("empty sample")
    if not np.all(np.isfinite(arr)):
        raise DegenerateSampleError("sample contains non-finite values")
    return arr


def moments(xs, require_shape=True):
    """Mean, variance, skewness and raw kurtosis of a sample.

    Raises :class:`InsufficientDataError` for fewer than two points and
    :class:`DegenerateSampleError` for zero variance unless
    ``require_shape`` is false, in which case the shape moments are
    reported as ``None``.
    """
    x = _as_sample(xs)
    n = x.size
    if n < 2:
        raise InsufficientDataError("moments need at least 2 points")
    mean = float(np.mean(x))
    dev = x - mean
    m2 = float(np.mean(dev ** 2))
    if m2 <= 0.0:
        if require_shape:
            raise DegenerateSampleError("zero variance: skewness and kurtosis undefined")
        return MomentSummary(n, mean, 0.0)
    m3 = float(np.mean(dev ** 3))
    m4 = float(np.mean(dev ** 4))
    return MomentSummary(n, mean, m2, m3 / m2 ** 1.5, m4 / (m2 * m2))


def standardize(xs):
    """Return ``((x - mean) / sd, (mean, sd))`` with the 1/n standard deviation."""
    x = _as_sample(xs)
    sd = float(np.std(x))
    if sd <= 0:
        raise DegenerateSampleError("cannot standardize a constant sample")
    mean = float(np.mean(x))
    return (x - mean) / sd, (mean, sd)


@dataclass
class FitResult:
    """One family fitted to one sample.

    ``distribution`` is ``None`` when the fit was infeasible; in that case
    ``log_lik`` is ``-inf``, the criteria are ``+inf`` and ``error`` says
    why.  ``ks_stat`` is only computed for continuous families.
    """

    family: Family
    distribution: Distribution
    log_lik: float
    aic: float
    bic: float
    ks_stat: float
    n: int
    k: int
    converged: bool
    standardized: bool = False
    transform: tuple = None
    error: str = None
    n_impossible: int = 0

    @property
    def feasible(self):
        return self.distribution is not None and math.isfinite(self.log_lik)

    def criterion_value(self, criterion):
        c = Criterion.parse(criterion)
        if c is Criterion.AIC:
            return self.aic
        if c is Criterion.BIC:
            return self.bic
        return -self.log_lik

    def to_dict(self):
        return {
            "family": self.family.value,
            "distribution": None if self.distribution is None else self.distribution.to_dict(),
            "log_lik": _num(self.log_lik),
            "aic": _num(self.aic),
            "bic": _num(self.bic),
            "ks_stat": self.ks_stat,
            "n": self.n,
            "k": self.k,
            "converged": self.converged,
            "standardized": self.standardized,
            "transform": None if self.transform is None else list(self.transform),
            "error": self.error,
            "n_impossible": self.n_impossible,
        }

    @classmethod
    def from_dict(cls, r):
        dist = r.get("distribution")
        return cls(
            family=Family.parse(r["family"]),
            distribution=None if dist is None else Distribution.from_dict(dist),
            log_lik=_unnum(r["log_lik"]),
            aic=_unnum(r["aic"]),
            bic=_unnum(r["bic"]),
            ks_stat=r.get("ks_stat"),
            n=int(r["n"]),
            k=int(r["k"]),
            converged=bool(r["converged"]),
            standardized=bool(r.get("standardized", False)),
            transform=None if r.get("transform") is None else tuple(r["transform"]),
            error=r.get("error"),
            n_impossible=int(r.get("n_impossible", 0)),
        )


def _num(v):
    # JSON has no infinities
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "-inf" if v < 0 else "nan"
    return v


def _unnum(v):
    return float(v) if isinstance(v, str) else v


def _result(family, dist, x, converged, standardized=False, transform=None):
    n = x.size
    k = family.n_params
    ll = dist.log_likelihood(x)
    impossible = dist.impossible_points(x) if not math.isfinite(ll) else 0
    ks = None if family.discrete else ks_statistic(dist, x)
    return FitResult(
        family=family,
        distribution=dist,
        log_lik=ll,
        aic=2 * k - 2 * ll,
        bic=k * math.log(n) - 2 * ll,
        ks_stat=ks,
        n=n,
        k=k,
        converged=converged,
        standardized=standardized,
        transform=transform,
        n_impossible=impossible,
    )


def _failed(family, n, error, standardized=False):
    return FitResult(family, None, -math.inf, math.inf, math.inf, None, n, family.n_params,
                     False, standardized, None, str(error))


# ---------------------------------------------------------------------------
# per-family estimators; each returns (Distribution, converged)


def _fit_normal(x):
    sd = float(np.std(x))
    if sd <= 0:
        raise InfeasibleFitError("Normal: zero variance")
    return Distribution(Family.NORMAL, (float(np.mean(x)), sd)), True


def _require_counts(x, family):
    if np.any(x < 0) or np.any(x != np.floor(x)):
        raise InfeasibleFitError(f"{family.value}: data must be nonnegative integers")


def _fit_poisson(x):
    _require_counts(x, Family.POISSON)
    lam = float(np.mean(x))
    if lam <= 0:
        raise InfeasibleFitError("Poisson: all-zero sample")
    return Distribution(Family.POISSON, (lam,)), True


def _fit_negbinomial(x):
    _require_counts(x, Family.NEG_BINOMIAL)
    mu = float(np.mean(x))
    if mu <= 0:
        raise InfeasibleFitError("NegBinomial: all-zero sample")
    vals, counts = np.unique(x, return_counts=True)
    var = float(np.var(x))
    size0 = mu * mu / (var - mu) if var > mu else 1e6
    upper = math.log(1e10)

    def objective(theta):
        t = theta[0]
        if t > upper or t < math.log(1e-8):
            return math.inf
        d = Distribution(Family.NEG_BINOMIAL, (math.exp(t), mu))
        return -float(np.dot(d.logpdf(vals), counts))

    res = minimize_with_restarts(objective, [math.log(size0)], step=0.5, restarts=RESTARTS,
                                 jitter=0.1, xtol=XTOL, ftol=FTOL)
    return Distribution(Family.NEG_BINOMIAL, (math.exp(res.x[0]), mu)), res.converged


def _fit_exponential(x):
    xmin = float(np.min(x))
    span = float(np.max(x)) - xmin
    gap = LOC_FLOOR * span if span > 0 else LOC_FLOOR * max(abs(xmin), 1.0)
    loc = xmin - gap
    scale = float(np.mean(x)) - loc
    return Distribution(Family.EXPONENTIAL, (loc, scale)), True


class _Shift:
    """Maps an unconstrained ``t`` to ``loc = min(x) - floor - range * exp(t)``."""

    def __init__(self, x):
        self.xmin = float(np.min(x))
        self.span = float(np.max(x)) - self.xmin
        if self.span <= 0:
            raise InfeasibleFitError("shifted fit needs a non-constant sample")
        self.floor = LOC_FLOOR * self.span

    def loc(self, t):
        return self.xmin - self.floor - self.span * math.exp(min(t, 700.0))

    def t(self, loc):
        gap = self.xmin - self.floor - loc
        if gap <= 0:
            gap = 1e-3 * self.span
        return math.log(gap / self.span)


def _lognormal_profile(x, loc):
    logs = np.log(x - loc)
    mu = float(np.mean(logs))
    sigma = float(np.sqrt(np.mean((logs - mu) ** 2)))
    if not sigma > 0:
        return None, -math.inf
    n = x.size
    ll = -float(np.sum(logs)) - n * math.log(sigma) - n * _HALF_LOG_2PI - 0.5 * n
    return (sigma, loc, math.exp(mu)), ll


def _invgauss_profile(x, loc):
    y = x - loc
    m = float(np.mean(y))
    inv = float(np.mean(1.0 / y)) - 1.0 / m
    if not inv > 0:
        return None, -math.inf
    lam = 1.0 / inv
    n = x.size
    # density in (mean m, shape lam) form; equals the (m/lam, loc, lam) shape-loc-scale form
    ll = (0.5 * n * math.log(lam) - n * _HALF_LOG_2PI - 1.5 * float(np.sum(np.log(y)))
          - lam * float(np.sum((y - m) ** 2 / y)) / (2.0 * m * m))
    return (m / lam, loc, lam), ll


def _fit_profiled(x, family, profile, loc0):
    shift = _Shift(x)

    def objective(theta):
        _, ll = profile(x, shift.loc(theta[0]))
        return -ll

    # coarse scan over the shift guards against poor moment starts
    grid = np.linspace(-18.0, 6.0, 25)
    scores = [objective([t]) for t in grid]
    starts = [shift.t(loc0), float(grid[int(np.argmin(scores))])]
    best = None
    for s in starts:
        res = minimize_with_restarts(objective, [s], step=0.5, restarts=RESTARTS, jitter=0.1,
                                     xtol=XTOL, ftol=FTOL)
        if best is None or res.fun < best.fun:
            best = res
    params, ll = profile(x, shift.loc(best.x[0]))
    if params is None or not math.isfinite(ll):
        raise InfeasibleFitError(f"{family.value}: no finite likelihood found")
    return Distribution(family, params), best.converged


def _lognormal_start(x):
    mean, sd = float(np.mean(x)), float(np.std(x))
    g = _skew(x)
    if g <= 0.05:
        return float(np.min(x)) - sd
    # invert skewness (w + 2) sqrt(w - 1) with w = exp(sigma^2): s^3 + 3 s - g = 0, s = sqrt(w - 1)
    root = math.sqrt(g * g / 4.0 + 1.0)
    s = math.copysign(abs(g / 2.0 + root) ** (1 / 3), g / 2.0 + root) + \
        math.copysign(abs(g / 2.0 - root) ** (1 / 3), g / 2.0 - root)
    w = 1.0 + s * s
    scale = sd / math.sqrt((w - 1.0) * w)
    return mean - scale * math.sqrt(w)


def _invgauss_start(x):
    mean, sd = float(np.mean(x)), float(np.std(x))
    g = _skew(x)
    if g <= 0.05:
        return float(np.min(x)) - sd
    return mean - 3.0 * sd / g


def _skew(x):
    dev = x - np.mean(x)
    m2 = float(np.mean(dev ** 2))
    return float(np.mean(dev ** 3)) / m2 ** 1.5 if m2 > 0 else 0.0


def _fit_lognormal(x):
    return _fit_profiled(x, Family.LOGNORMAL, _lognormal_profile, _lognormal_start(x))


def _fit_invgauss(x):
    return _fit_profiled(x, Family.INVERSE_GAUSSIAN, _invgauss_profile, _invgauss_start(x))


def _fit_joint(x, family, starts):
    """Joint simplex over (log shape, log scale, t) from several starting points."""
    shift = _Shift(x)

    def build(theta):
        shape, scale = math.exp(theta[0]), math.exp(theta[1])
        return Distribution(family, (shape, shift.loc(theta[2]), scale))

    def objective(theta):
        if abs(theta[0]) > 50 or abs(theta[1]) > 700:
            return math.inf
        return -build(theta).log_likelihood(x)

    best = None
    for shape, loc, scale in starts:
        theta0 = [math.log(shape), math.log(scale), shift.t(loc)]
        res = minimize_with_restarts(objective, theta0, step=[0.2, 0.2, 0.5], restarts=RESTARTS,
                                     jitter=0.05, xtol=XTOL, ftol=FTOL)
        if best is None or res.fun < best.fun:
            best = res
    if not math.isfinite(best.fun):
        raise InfeasibleFitError(f"{family.value}: no finite likelihood found")
    # polish: a fresh simplex from the optimum
    polished = nelder_mead(objective, best.x, step=[0.01, 0.01, 0.05], xtol=XTOL, ftol=FTOL)
    if polished.fun <= best.fun:
        best = replace(best, x=polished.x, fun=polished.fun,
                       converged=polished.converged or best.converged)
    return build(best.x), best.converged


def _gamma_starts(x):
    mean, sd, xmin = float(np.mean(x)), float(np.std(x)), float(np.min(x))
    g = _skew(x)
    starts = []
    if g > 0.1:
        a = 4.0 / (g * g)
        scale = sd / math.sqrt(a)
        loc = mean - a * scale
        if loc < xmin:
            starts.append((a, loc, scale))
    loc = xmin - 0.1 * sd
    a = (mean - loc) ** 2 / (sd * sd)
    starts.append((a, loc, sd * sd / (mean - loc)))
    return starts


def _weibull_starts(x):
    mean, sd, xmin = float(np.mean(x)), float(np.std(x)), float(np.min(x))
    starts = []
    for frac in (0.05, 0.5):
        loc = xmin - frac * sd
        m = mean - loc
        c = min(max((sd / m) ** -1.086, 0.1), 20.0)
        starts.append((c, loc, m / math.gamma(1.0 + 1.0 / c)))
    return starts


def _fit_gamma(x):
    return _fit_joint(x, Family.GAMMA, _gamma_starts(x))


def _fit_weibull(x):
    return _fit_joint(x, Family.WEIBULL_MIN, _weibull_starts(x))


_FITTERS = {
    Family.NORMAL: _fit_normal,
    Family.POISSON: _fit_poisson,
    Family.NEG_BINOMIAL: _fit_negbinomial,
    Family.EXPONENTIAL: _fit_exponential,
    Family.LOGNORMAL: _fit_lognormal,
    Family.INVERSE_GAUSSIAN: _fit_invgauss,
    Family.GAMMA: _fit_gamma,
    Family.WEIBULL_MIN: _fit_weibull,
}


def fit_family(family, xs, standardize_first=False):
    """Maximum-likelihood fit of one family.

    Parameters
    ----------
    family : Family or str
    xs : array_like or Sample
    standardize_first : bool
        Fit the z-scored sample instead of the raw one; the result records
        ``standardized=True`` and the ``(mean, sd)`` transform.

    Raises
    ------
    InfeasibleFitError
        The sample violates the family's support (e.g. non-integers for a
        count family) or no finite likelihood exists.
    """
    family = Family.parse(family)
    x = _as_sample(xs)
    if x.size < 2:
        raise InsufficientDataError("fitting needs at least 2 points")
    transform = None
    if standardize_first:
        x, transform = standardize(x)
    dist, converged = _FITTERS[family](x)
    return _result(family, dist, x, converged, standardize_first, transform)


def ks_statistic(d, xs):
    """One-sample Kolmogorov-Smirnov distance between ``xs`` and ``d``."""
    if d.family.discrete:
        raise UnsupportedFamilyError("KS statistic is reserved for continuous families")
    x = np.sort(_as_sample(xs))
    n = x.size
    f = d.cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - f)), np.max(np.abs((i - 1) / n - f))))


def ks_distance(d, xs):
    """KS distance for any family.

    Continuous families use :func:`ks_statistic`.  For discrete families
    both CDFs are step functions jumping at integers, so the supremum is
    taken over the integers from 0 to the sample maximum (and the tail
    beyond it).
    """
    if not d.family.discrete:
        return ks_statistic(d, xs)
    x = np.sort(_as_sample(xs))
    top = max(int(np.max(x)), 0)
    grid = np.arange(0, top + 1, dtype=np.float64)
    emp = np.searchsorted(x, grid, side="right") / x.size
    gap = np.max(np.abs(emp - d.cdf(grid)))
    below = float(np.sum(x < 0)) / x.size
    return float(max(gap, d.sf(float(top)), below))


@dataclass
class Ranking:
    """Fits ordered best first under ``criterion``; failed fits come last."""

    results: list
    criterion: Criterion = Criterion.AIC

    @property
    def best(self):
        return self.results[0]

    @property
    def order(self):
        return [r.family for r in self.results]

    def to_dict(self):
        return {"criterion": self.criterion.value,
                "order": [f.value for f in self.order],
                "results": [r.to_dict() for r in self.results]}

    @classmethod
    def from_dict(cls, r):
        return cls([FitResult.from_dict(x) for x in r["results"]], Criterion.parse(r["criterion"]))


_CHAIN = (Criterion.AIC, Criterion.BIC, Criterion.LOGLIK)


def _rank_key(result, criterion):
    chain = [criterion] + [c for c in _CHAIN if c is not criterion]
    return ((not result.feasible, not result.converged)
            + tuple(result.criterion_value(c) for c in chain)
            + (result.family.order,))


def sort_results(results, criterion=Criterion.AIC):
    criterion = Criterion.parse(criterion)
    return Ranking(sorted(results, key=lambda r: _rank_key(r, criterion)), criterion)


def rank_fits(xs, families, criterion=Criterion.AIC, standardize_first=False):
    """Fit every requested family and order them by ``criterion``.

    Ties fall through AIC, BIC, log-likelihood, then family declaration
    order.  Infeasible fits are kept (flagged, with ``+inf`` criteria) and
    rank after all feasible ones; non-converged fits rank after converged.
    """
    fams = []
    for f in families:
        f = Family.parse(f)
        if f not in fams:
            fams.append(f)
    if len(fams) < 2:
        raise ValueError("rank_fits needs at least two families")
    x = _as_sample(xs)
    results = []
    for fam in fams:
        try:
            results.append(fit_family(fam, x, standardize_first))
        except InfeasibleFitError as exc:
            results.append(_failed(fam, x.size, exc, standardize_first))
    if not any(r.feasible for r in results):
        raise NoFitError("no requested family could be fitted: " +
                         "; ".join(f"{r.family.value}: {r.error}" for r in results))
    return sort_results(results, criterion)


# ---------------------------------------------------------------------------
# diagnostic series


def pp_series(d, xs):
    """P-P pairs: plotting position ``(i - 0.5)/n`` against ``F(x_(i))``."""
    x = np.sort(_as_sample(xs))
    n = x.size
    emp = (np.arange(1, n + 1) - 0.5) / n
    return AnalysisSeries(f"pp:{d.family.value}", {"empirical": emp, "theoretical": d.cdf(x)},
                          {"distribution": d.to_dict()})


def cdf_compare_series(d, xs, grid=None):
    """Empirical CDF and fitted CDF on the sorted distinct sample values (or ``grid``)."""
    x = np.sort(_as_sample(xs))
    if grid is None:
        grid = np.unique(x)
    else:
        grid = np.asarray(grid, dtype=np.float64).reshape(-1)
        if grid.size == 0:
            raise EmptySampleError("empty evaluation grid")
        grid = np.sort(grid)
    emp = np.searchsorted(x, grid, side="right") / x.size
    fitted = d.cdf(grid)
    return AnalysisSeries(f"cdf:{d.family.value}", {"x": grid, "empirical": emp, "fitted": fitted},
                          {"distribution": d.to_dict(),
                           "max_abs_diff": float(np.max(np.abs(emp - fitted)))})


def bin_edges(x, bins):
    """Resolve a bin spec (count or explicit edges) to an increasing edge array."""
    if np.ndim(bins) == 0:
        nb = int(bins)
        if nb <= 0:
            raise ValueError("number of bins must be positive")
        lo, hi = float(np.min(x)), float(np.max(x))
        if hi == lo:
            lo, hi = lo - 0.5, hi + 0.5
        return np.linspace(lo, hi, nb + 1)
    edges = np.asarray(bins, dtype=np.float64).reshape(-1)
    if edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be strictly increasing with at least one bin")
    return edges


def density_compare_series(d, xs, bins=30):
    """Unit-area histogram against the fitted density at bin centres.

    For discrete families the fitted column is the PMF mass inside each
    bin divided by the bin width, which is comparable to the histogram.
    """
    x = _as_sample(xs)
    edges = bin_edges(x, bins)
    counts, _ = np.histogram(x, bins=edges)
    widths = np.diff(edges)
    total = counts.sum()
    height = counts / (total * widths) if total else np.zeros_like(widths)
    centers = 0.5 * (edges[:-1] + edges[1:])
    if d.family.discrete:
        # integers in [lo, hi), the last bin closed on the right as np.histogram does
        first = np.ceil(edges[:-1])
        last = np.ceil(edges[1:]) - 1.0
        last[-1] = np.floor(edges[-1])
        fitted = np.maximum(d.cdf(last) - d.cdf(first - 1.0), 0.0) / widths
    else:
        fitted = d.density(centers)
    return AnalysisSeries(f"density:{d.family.value}",
                          {"center": centers, "histogram": height, "fitted": fitted},
                          {"distribution": d.to_dict(), "edges": edges.tolist()})
