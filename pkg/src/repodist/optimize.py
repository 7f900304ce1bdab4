"""Derivative-free Nelder-Mead simplex minimizer."""
from dataclasses import dataclass

import numpy as np


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    n_iter: int
    n_eval: int
    converged: bool


def _safe(fn, x):
    value = fn(x)
    value = float(value)
    return value if np.isfinite(value) else np.inf


def nelder_mead(fn, x0, step=0.1, xtol=1e-8, ftol=1e-10, max_iter=5000):
    """Minimize ``fn`` starting from ``x0``.

    Non-finite objective values are treated as ``+inf`` so infeasible
    regions repel the simplex.  Convergence is declared when every vertex
    lies within ``xtol`` of the best one (max-norm) and the spread of
    objective values is below ``ftol * max(1, |f_best|)``.  Requiring both
    stops a simplex straddling the minimum with equal values from quitting.

    Parameters
    ----------
    fn : callable
        Objective taking a 1-D array.
    x0 : array_like
        Starting point.
    step : float or array_like
        Edge length of the initial simplex along each axis.
    """
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    n = x0.size
    steps = np.broadcast_to(np.asarray(step, dtype=np.float64), (n,))
    simplex = np.empty((n + 1, n))
    simplex[0] = x0
    for i in range(n):
        vertex = x0.copy()
        vertex[i] += steps[i] if steps[i] != 0 else 0.05
        simplex[i + 1] = vertex
    values = np.array([_safe(fn, v) for v in simplex])
    n_eval = n + 1

    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex = simplex[order]
        values = values[order]
        best = values[0]
        spread = np.max(np.abs(simplex[1:] - simplex[0]))
        if np.isfinite(best) and (
                spread <= xtol and (values[-1] - best) <= ftol * max(1.0, abs(best))):
            converged = True
            break

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        reflected = centroid + alpha * (centroid - worst)
        f_r = _safe(fn, reflected)
        n_eval += 1
        if values[0] <= f_r < values[-2]:
            simplex[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            f_e = _safe(fn, expanded)
            n_eval += 1
            if f_e < f_r:
                simplex[-1], values[-1] = expanded, f_e
            else:
                simplex[-1], values[-1] = reflected, f_r
            continue
        if f_r < values[-1]:
            contracted = centroid + rho * (reflected - centroid)
        else:
            contracted = centroid + rho * (worst - centroid)
        f_c = _safe(fn, contracted)
        n_eval += 1
        if f_c < min(f_r, values[-1]):
            simplex[-1], values[-1] = contracted, f_c
            continue
        for i in range(1, n + 1):
            simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
            values[i] = _safe(fn, simplex[i])
        n_eval += n

    order = np.argsort(values, kind="stable")
    return SimplexResult(simplex[order[0]].copy(), float(values[order[0]]), it, n_eval, converged)


def minimize_with_restarts(fn, x0, step=0.1, restarts=3, jitter=0.05, seed=0, **kwargs):
    """Nelder-Mead from ``x0`` followed by ``restarts`` jittered restarts.

    Each restart begins at the incumbent best point plus a small seeded
    perturbation, which shakes the simplex out of premature collapse.  The
    returned ``converged`` flag belongs to the run that produced the best
    point.
    """
    rng = np.random.default_rng(seed)
    best = nelder_mead(fn, x0, step=step, **kwargs)
    total_eval = best.n_eval
    for _ in range(restarts):
        start = best.x + jitter * rng.standard_normal(best.x.size)
        trial = nelder_mead(fn, start, step=step, **kwargs)
        total_eval += trial.n_eval
        if trial.fun < best.fun or (trial.fun == best.fun and trial.converged):
            best = trial
    best.n_eval = total_eval
    return best
