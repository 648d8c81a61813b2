"""Evidential clustering of dissimilarity data: RECM and ECMdd."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._core import (
    SolverParams,
    alternate,
    best_of,
    check_c,
    focal_parts,
    logger,
    resolve_params,
    sample_indices,
    solve_prototypes,
)
from .data import as_dissimilarity
from .partition import CredalPartition

# negative implicit distances beyond this are counted before clamping
CLAMP_TOL = 1e-9


def _diagnostics(res, trials, best, **extra):
    out = {
        "n_iter": res.n_iter,
        "converged": res.converged,
        "history": res.history,
        "best_trial": best,
        "trial_criteria": [r.criterion for r in trials],
    }
    out.update(extra)
    return out


# -- RECM -----------------------------------------------------------------


class _ImplicitDistances:
    """Squared distances to prototypes given as affine combinations of objects."""

    def __init__(self, tau, s, card):
        self.tau = tau
        self.s = s
        self.card = card
        self.clamped = 0

    def __call__(self, g):
        h = (self.s @ g) / self.card[:, None]
        th = self.tau @ h.T
        dist = th - 0.5 * np.einsum("jk,kj->j", h, th)[None, :]
        neg = dist < -CLAMP_TOL
        if neg.any():
            self.clamped += int(neg.sum())
        return np.maximum(dist, 0.0)


def _barycentric_weights(mass, s, card, alpha, beta, it):
    w = card**alpha * mass[:, 1:] ** beta
    h = s.T @ ((w.sum(axis=0) * card ** -2.0)[:, None] * s)
    coef = (w / card) @ s
    return solve_prototypes(h, coef.T, it)


def recm_fit(d, c: int, params: SolverParams | None = None, *, m0=None, **kwargs) -> CredalPartition:
    """Relational evidential c-means.

    ``d`` is read as squared Euclidean distances between objects. Each
    singleton prototype is kept implicitly as an affine combination of the
    objects (``prototypes`` holds these ``(c, n)`` weights), which makes
    the iterates identical to :func:`~credalclust.attribute.ecm_fit` run on
    any configuration realizing ``d``.

    Parameters
    ----------
    d : array-like of shape (n, n)
    c : int
    m0 : array-like of shape (n, f), optional
        Initial masses; the first prototypes are computed from them.
        Otherwise each trial starts with prototypes on ``c`` distinct
        objects drawn with seed ``seed + trial``.

    Notes
    -----
    Non-Euclidean input can give negative implicit distances; they are
    clamped to zero and counted in ``diagnostics["negative_distance_clamps"]``.
    """
    p = resolve_params(params, kwargs)
    tau = as_dissimilarity(d)
    n = tau.shape[0]
    c = check_c(c, n)
    focal = p.focal(c)
    s, card = focal_parts(focal)
    delta2 = p.delta**2

    if m0 is not None:
        m0 = np.asarray(m0, dtype=float)
        if m0.shape != (n, focal.f):
            raise ValueError(f"m0 has shape {m0.shape}, expected {(n, focal.f)}")
        starts = [_barycentric_weights(m0, s, card, p.alpha, p.beta, 0)]
    else:
        starts = []
        for t in range(p.ntrials):
            g = np.zeros((c, n))
            g[np.arange(c), sample_indices(n, c, p.seed + t)] = 1.0
            starts.append(g)

    trials, clamps = [], []
    for t, g0 in enumerate(starts):
        dist = _ImplicitDistances(tau, s, card)
        trials.append(
            alternate(
                g0,
                dist,
                lambda m, _, it: _barycentric_weights(m, s, card, p.alpha, p.beta, it),
                card, p.alpha, p.beta, delta2, p.maxit, p.epsi, f"recm[{t}]",
            )
        )
        clamps.append(dist.clamped)
    best, res = best_of(trials)
    if clamps[best]:
        logger.warning("recm: clamped %d negative implicit distances; input is not Euclidean", clamps[best])
    return CredalPartition(
        mass=res.mass,
        focal=focal,
        criterion=res.criterion,
        method="recm",
        params=p.to_dict(),
        prototypes=res.proto,
        seed=p.seed,
        diagnostics=_diagnostics(res, trials, best, negative_distance_clamps=clamps[best]),
    )


# -- ECMdd ----------------------------------------------------------------


def medoid_distances(d, medoids, s, card) -> np.ndarray:
    """Mean dissimilarity from each object to the medoids of each focal set."""
    return (d[:, medoids] @ s.T) / card


def assign_medoids(cost: np.ndarray) -> np.ndarray:
    """Distinct medoids minimizing the total of ``cost[k, medoid_k]``.

    Each cluster takes its own cheapest object (lowest index on ties);
    collisions are resolved by an optimal assignment.
    """
    choice = np.argmin(cost, axis=1)
    if len(set(choice.tolist())) == len(choice):
        return choice
    rows, cols = linear_sum_assignment(cost)
    out = np.empty(cost.shape[0], dtype=int)
    out[rows] = cols
    return out


def medoid_weights(mass, s, card, alpha, beta) -> np.ndarray:
    """``(n, c)`` weight of each object in each singleton cluster's medoid cost."""
    return ((card**alpha * mass[:, 1:] ** beta) / card) @ s


def ecmdd_fit(d, c: int, params: SolverParams | None = None, *, medoids0=None, **kwargs) -> CredalPartition:
    """Evidential c-medoids.

    The dissimilarity between object ``i`` and focal set ``A`` is the mean
    of ``d[i, medoid_k]`` over the clusters ``k`` in ``A``; ``d`` is used
    as given (it need not be metric). Medoids are distinct objects, chosen
    exactly at every sweep. ``prototypes`` holds the ``c`` medoid indices.
    """
    p = resolve_params(params, kwargs)
    tau = as_dissimilarity(d)
    n = tau.shape[0]
    c = check_c(c, n)
    focal = p.focal(c)
    s, card = focal_parts(focal)
    delta2 = p.delta**2

    if medoids0 is not None:
        starts = [_check_medoids(medoids0, c, n)]
    else:
        starts = [sample_indices(n, c, p.seed + t) for t in range(p.ntrials)]

    def update(mass, _, it):
        w = medoid_weights(mass, s, card, p.alpha, p.beta)
        return assign_medoids(w.T @ tau)

    trials = [
        alternate(
            np.asarray(m0),
            lambda med: medoid_distances(tau, med, s, card),
            update,
            card, p.alpha, p.beta, delta2, p.maxit, p.epsi, f"ecmdd[{t}]",
        )
        for t, m0 in enumerate(starts)
    ]
    best, res = best_of(trials)
    return CredalPartition(
        mass=res.mass,
        focal=focal,
        criterion=res.criterion,
        method="ecmdd",
        params=p.to_dict(),
        prototypes=np.asarray(res.proto, dtype=int),
        seed=p.seed,
        diagnostics=_diagnostics(res, trials, best),
    )


def _check_medoids(medoids, c, n) -> np.ndarray:
    med = np.asarray(medoids, dtype=int)
    if med.shape != (c,) or len(set(med.tolist())) != c or med.min() < 0 or med.max() >= n:
        raise ValueError(f"initial medoids must be {c} distinct indices in [0, {n})")
    return med
