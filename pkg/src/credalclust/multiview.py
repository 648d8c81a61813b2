"""Multi-view evidential c-medoids with adaptive view weights (MECMdd).

Two weighting schemes are available:

``RWG``
    one weight per view, shared by every focal set;
``RWL``
    one weight per (nonempty focal set, view).

Both minimize

    sum_i sum_{A_j != {}} |A_j|^alpha m_ij^beta sum_l lambda_jl^s tau_ijl
        + sum_l delta_l^2 sum_i m_i{}^beta

by cyclic exact updates of the masses, the medoids of every view and the
weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._core import (
    SolverParams,
    alternate,
    best_of,
    check_c,
    focal_parts,
    resolve_params,
    sample_indices,
)
from .data import DataError, as_dissimilarity
from .partition import CredalPartition
from .relational import assign_medoids, medoid_distances


@dataclass
class _State:
    medoids: np.ndarray  # (p, c)
    weights: np.ndarray  # (f-1, p) for RWL, (1, p) for RWG


def view_weights(inner: np.ndarray, s_exp: float, variant: str) -> np.ndarray:
    """Optimal weights for per-(focal set, view) costs ``inner`` of shape (f-1, p).

    Weights are proportional to ``cost ** (-1 / (s - 1))`` and sum to one
    over views. Views with zero cost share the whole weight evenly.
    """
    cost = inner.sum(axis=0, keepdims=True) if variant == "RWG" else inner
    out = np.empty_like(cost, dtype=float)
    e = 1.0 / (s_exp - 1.0)
    for j, row in enumerate(cost):
        zero = row <= 0.0
        if zero.any():
            out[j] = zero / zero.sum()
            continue
        logw = -e * np.log(row)
        w = np.exp(logw - logw.max())
        out[j] = w / w.sum()
    return out


def _check_views(views) -> list[np.ndarray]:
    views = [as_dissimilarity(v) for v in views]
    if not views:
        raise DataError("at least one view is required")
    n = views[0].shape[0]
    for l, v in enumerate(views):
        if v.shape[0] != n:
            raise DataError(f"view {l} has {v.shape[0]} objects, view 0 has {n}")
    return views


def mecmdd_fit(
    views,
    c: int,
    params: SolverParams | None = None,
    *,
    deltas=None,
    **kwargs,
) -> CredalPartition:
    """Multi-view evidential c-medoids.

    Parameters
    ----------
    views : sequence of (n, n) dissimilarity matrices
    c : int
    params : SolverParams, optional
        Uses ``s`` (view-weight exponent, > 1) and ``variant`` (``"RWG"``
        or ``"RWL"``) besides the usual ECM fields.
    deltas : sequence of float, optional
        Per-view outlier distances; every view uses ``params.delta`` when
        omitted.

    Returns
    -------
    CredalPartition
        ``prototypes`` is the ``(p, c)`` array of medoid indices per view
        and ``view_weights`` the weight matrix, ``(1, p)`` for RWG and
        ``(f-1, p)`` for RWL.
    """
    p = resolve_params(params, kwargs)
    views = _check_views(views)
    nv = len(views)
    n = views[0].shape[0]
    c = check_c(c, n)
    if deltas is None:
        deltas = [p.delta] * nv
    deltas = np.asarray(deltas, dtype=float)
    if deltas.shape != (nv,) or (deltas <= 0).any():
        raise ValueError(f"deltas must be {nv} positive values")
    delta2 = float(np.sum(deltas**2))
    focal = p.focal(c)
    s, card = focal_parts(focal)
    rows = 1 if p.variant == "RWG" else s.shape[0]

    def per_view(medoids):
        return np.stack([medoid_distances(views[l], medoids[l], s, card) for l in range(nv)])

    def distances(state):
        lam = np.broadcast_to(state.weights, (s.shape[0], nv)) ** p.s
        return np.einsum("lij,jl->ij", per_view(state.medoids), lam)

    def update(mass, state, it):
        w = card**p.alpha * mass[:, 1:] ** p.beta
        lam = np.broadcast_to(state.weights, (s.shape[0], nv)) ** p.s
        medoids = np.stack(
            [assign_medoids(((w * lam[:, l] / card) @ s).T @ views[l]) for l in range(nv)]
        )
        inner = np.einsum("ij,lij->jl", w, per_view(medoids))
        return _State(medoids, view_weights(inner, p.s, p.variant))

    trials = []
    for t in range(p.ntrials):
        start = sample_indices(n, c, p.seed + t)
        state = _State(np.tile(start, (nv, 1)), np.full((rows, nv), 1.0 / nv))
        trials.append(
            alternate(state, distances, update, card, p.alpha, p.beta, delta2, p.maxit, p.epsi,
                      f"mecmdd-{p.variant}[{t}]")
        )
    best, res = best_of(trials)
    params_echo = p.to_dict()
    params_echo["deltas"] = deltas.tolist()
    return CredalPartition(
        mass=res.mass,
        focal=focal,
        criterion=res.criterion,
        method=f"mecmdd_{p.variant.lower()}",
        params=params_echo,
        prototypes=res.proto.medoids,
        view_weights=res.proto.weights,
        seed=p.seed,
        diagnostics={
            "n_iter": res.n_iter,
            "converged": res.converged,
            "history": res.history,
            "best_trial": best,
            "trial_criteria": [r.criterion for r in trials],
        },
    )
