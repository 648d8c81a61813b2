"""Evidential c-means solvers for attribute data: ECM, CCM and CatECM."""

from __future__ import annotations

import numpy as np

from ._core import (
    SolverParams,
    alternate,
    best_of,
    check_c,
    focal_parts,
    resolve_params,
    sample_indices,
    solve_prototypes,
)
from .data import CategoricalData
from .partition import CredalPartition


def _as_matrix(x) -> np.ndarray:
    x = np.asarray(getattr(x, "x", x), dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] == 0 or x.shape[1] == 0:
        raise ValueError(f"expected a non-empty (n, p) data matrix, got shape {x.shape}")
    if not np.isfinite(x).all():
        i, q = np.argwhere(~np.isfinite(x))[0]
        raise ValueError(f"non-finite value at row {i}, column {q}")
    return x


def squared_distances(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """``(n, m)`` squared Euclidean distances from rows of ``x`` to ``centers``."""
    return ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def meta_centers(v: np.ndarray, s: np.ndarray, card: np.ndarray) -> np.ndarray:
    """Center of each nonempty focal set: the mean of its member centers."""
    return (s @ v) / card[:, None]


def _initial_centers(x, c, g0, seed):
    if g0 is None:
        return x[sample_indices(len(x), c, seed)].copy()
    g0 = np.asarray(g0, dtype=float)
    if g0.shape != (c, x.shape[1]):
        raise ValueError(f"g0 has shape {g0.shape}, expected {(c, x.shape[1])}")
    return g0.copy()


def _fit_trials(method, x, c, p: SolverParams, g0, run):
    focal = p.focal(c)
    s, card = focal_parts(focal)
    ntrials = 1 if g0 is not None else p.ntrials
    trials = [
        run(_initial_centers(x, c, g0, p.seed + t), s, card, f"{method}[{t}]")
        for t in range(ntrials)
    ]
    best, res = best_of(trials)
    return CredalPartition(
        mass=res.mass,
        focal=focal,
        criterion=res.criterion,
        method=method,
        params=p.to_dict(),
        prototypes=res.proto,
        seed=p.seed,
        diagnostics={
            "n_iter": res.n_iter,
            "converged": res.converged,
            "history": res.history,
            "best_trial": best,
            "trial_criteria": [r.criterion for r in trials],
        },
    )


# -- ECM ------------------------------------------------------------------


def _ecm_centers(x, mass, s, card, alpha, beta, it):
    w = card**alpha * mass[:, 1:] ** beta
    h = s.T @ ((w.sum(axis=0) * card ** -2.0)[:, None] * s)
    rhs = ((w / card) @ s).T @ x
    return solve_prototypes(h, rhs, it)


def ecm_fit(x, c: int, params: SolverParams | None = None, *, g0=None, **kwargs) -> CredalPartition:
    """Evidential c-means on an ``(n, p)`` attribute matrix.

    Parameters
    ----------
    x : array-like of shape (n, p)
    c : int
        Number of singleton clusters.
    params : SolverParams, optional
        Keyword arguments override individual fields, e.g.
        ``ecm_fit(x, 3, delta=5, ntrials=10)``.
    g0 : array-like of shape (c, p), optional
        Initial centers. When omitted, each trial starts from ``c``
        distinct data rows drawn with seed ``seed + trial``.

    Returns
    -------
    CredalPartition
        Best trial by criterion; ``prototypes`` holds the ``(c, p)`` centers.
    """
    p = resolve_params(params, kwargs)
    x = _as_matrix(x)
    c = check_c(c, len(x))
    delta2 = p.delta**2

    def run(v0, s, card, label):
        return alternate(
            v0,
            lambda v: squared_distances(x, meta_centers(v, s, card)),
            lambda m, _, it: _ecm_centers(x, m, s, card, p.alpha, p.beta, it),
            card, p.alpha, p.beta, delta2, p.maxit, p.epsi, label,
        )

    return _fit_trials("ecm", x, c, p, g0, run)


# -- CCM ------------------------------------------------------------------


def ccm_distance(d2_singletons, d2_center: float, focal_row, gamma: float) -> float:
    """Credal c-means distance from one object to one nonempty focal set.

    Parameters
    ----------
    d2_singletons : array-like of shape (c,)
        Squared distances from the object to every singleton center.
    d2_center : float
        Squared distance to the center of the focal set.
    focal_row : array-like of shape (c,)
        0/1 membership of the focal set.
    gamma : float
        Weight of the focal-set center term.
    """
    row = np.asarray(focal_row, dtype=float)
    size = row.sum()
    if size == 0:
        raise ValueError("ccm_distance is undefined for the empty set")
    num = float(np.dot(row, np.asarray(d2_singletons, dtype=float))) + gamma * d2_center
    return num / (size + gamma)


def ccm_distances(x, v, s, card, gamma) -> np.ndarray:
    """Vectorized :func:`ccm_distance` over all objects and nonempty focal sets."""
    d_single = squared_distances(x, v)
    d_meta = squared_distances(x, meta_centers(v, s, card))
    return (d_single @ s.T + gamma * d_meta) / (card + gamma)


def _ccm_centers(x, mass, s, card, alpha, beta, gamma, it):
    w = card**alpha * mass[:, 1:] ** beta / (card + gamma)
    h = np.diag((w @ s).sum(axis=0)) + s.T @ ((gamma * w.sum(axis=0) / card**2)[:, None] * s)
    rhs = ((w * (1.0 + gamma / card)) @ s).T @ x
    return solve_prototypes(h, rhs, it)


def ccm_fit(x, c: int, params: SolverParams | None = None, *, g0=None, **kwargs) -> CredalPartition:
    """Credal c-means: ECM with the object-to-focal-set distance of :func:`ccm_distance`.

    ``gamma`` (default 1) weighs the focal-set center against the member
    singleton centers. Other arguments are as in :func:`ecm_fit`.
    """
    p = resolve_params(params, kwargs)
    x = _as_matrix(x)
    c = check_c(c, len(x))
    delta2 = p.delta**2

    def run(v0, s, card, label):
        return alternate(
            v0,
            lambda v: ccm_distances(x, v, s, card, p.gamma),
            lambda m, _, it: _ccm_centers(x, m, s, card, p.alpha, p.beta, p.gamma, it),
            card, p.alpha, p.beta, delta2, p.maxit, p.epsi, label,
        )

    return _fit_trials("ccm", x, c, p, g0, run)


# -- CatECM ---------------------------------------------------------------


def _as_categorical(data) -> CategoricalData:
    if isinstance(data, CategoricalData):
        return data
    return CategoricalData.from_codes(data)


def categorical_distances(codes: np.ndarray, profiles: list, s: np.ndarray, card: np.ndarray) -> np.ndarray:
    """Expected attribute mismatches between objects and focal-set profiles.

    ``profiles[q]`` is the ``(c, k_q)`` category distribution of attribute
    ``q`` in each singleton cluster; a focal set uses the mean of its
    members' distributions.
    """
    n = codes.shape[0]
    d2 = np.zeros((n, s.shape[0]))
    for q, prof in enumerate(profiles):
        meta = (s @ prof) / card[:, None]
        d2 += 1.0 - meta[:, codes[:, q]].T
    return d2


def _crisp_profiles(codes_rows: np.ndarray, cards) -> list:
    profiles = []
    for q, k in enumerate(cards):
        prof = np.zeros((len(codes_rows), k))
        prof[np.arange(len(codes_rows)), codes_rows[:, q]] = 1.0
        profiles.append(prof)
    return profiles


def _mode_profiles(codes, cards, mass, s, card, alpha, beta):
    # J is linear in each profile, so the block minimizer is the weighted mode
    w = ((card**alpha * mass[:, 1:] ** beta) / card) @ s
    profiles = []
    for q, k in enumerate(cards):
        onehot = np.zeros((codes.shape[0], k))
        onehot[np.arange(codes.shape[0]), codes[:, q]] = 1.0
        score = w.T @ onehot
        prof = np.zeros((w.shape[1], k))
        prof[np.arange(w.shape[1]), np.argmax(score, axis=1)] = 1.0
        profiles.append(prof)
    return profiles


def catecm_fit(data, c: int, params: SolverParams | None = None, **kwargs) -> CredalPartition:
    """Evidential c-means for categorical attributes.

    The dissimilarity between an object and a focal set is the expected
    number of attributes on which the object disagrees with the set's
    category profile; with crisp profiles this is the Hamming distance.
    Each singleton profile is updated to the weighted mode of its
    attributes.

    ``prototypes`` is a list over clusters of per-attribute frequency
    vectors.
    """
    p = resolve_params(params, kwargs)
    data = _as_categorical(data)
    codes, cards = data.codes, data.cardinalities
    if codes.shape[1] == 0:
        raise ValueError("categorical data has no attributes")
    c = check_c(c, codes.shape[0])
    focal = p.focal(c)
    s, card = focal_parts(focal)
    delta2 = p.delta**2

    trials = []
    for t in range(p.ntrials):
        init = _crisp_profiles(codes[sample_indices(len(codes), c, p.seed + t)], cards)
        trials.append(
            alternate(
                init,
                lambda prof: categorical_distances(codes, prof, s, card),
                lambda m, _, it: _mode_profiles(codes, cards, m, s, card, p.alpha, p.beta),
                card, p.alpha, p.beta, delta2, p.maxit, p.epsi, f"catecm[{t}]",
            )
        )
    best, res = best_of(trials)
    profiles = [[res.proto[q][k] for q in range(len(cards))] for k in range(c)]
    return CredalPartition(
        mass=res.mass,
        focal=focal,
        criterion=res.criterion,
        method="catecm",
        params=p.to_dict(),
        prototypes=profiles,
        seed=p.seed,
        diagnostics={
            "n_iter": res.n_iter,
            "converged": res.converged,
            "history": res.history,
            "best_trial": best,
            "trial_criteria": [r.criterion for r in trials],
            "categories": [list(cs) for cs in data.categories] if data.categories else None,
        },
    )
