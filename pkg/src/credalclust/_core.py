"""Machinery shared by the evidential c-means family of solvers."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, replace
from typing import Callable

import numpy as np

from .focal import FocalMatrix, make_focal_matrix

logger = logging.getLogger("credalclust")

# distances below this are treated as an exact fit
ZERO_DISTANCE = 1e-12
# condition number above which the prototype system is declared singular
MAX_CONDITION = 1e13


class SolverError(RuntimeError):
    """A solver could not complete (singular system, degenerate input)."""


class SingularSystemError(SolverError):
    def __init__(self, iteration: int, condition: float):
        self.iteration = iteration
        self.condition = condition
        super().__init__(
            f"prototype system is singular at iteration {iteration} (condition number {condition:.3g})"
        )


@dataclass(frozen=True)
class SolverParams:
    """Tuning parameters shared by all solvers.

    ``alpha`` penalizes imprecise focal sets, ``beta`` is the fuzzifier,
    ``delta`` the distance to the empty set (outlier threshold), ``gamma``
    the meta-cluster weight used by CCM and ``s`` the view-weight exponent
    used by MECMdd. Trial ``t`` is seeded with ``seed + t``.
    """

    alpha: float = 1.0
    beta: float = 2.0
    delta: float = 10.0
    gamma: float = 1.0
    s: float = 2.0
    ntrials: int = 1
    maxit: int = 100
    epsi: float = 1e-3
    seed: int = 0
    kind: str = "full"
    pairs: tuple | None = None
    include_omega: bool = True
    variant: str = "RWG"

    def __post_init__(self):
        checks = [
            (self.alpha >= 0, "alpha must be >= 0"),
            (self.beta > 1, "beta must be > 1"),
            (self.delta > 0, "delta must be > 0"),
            (self.gamma >= 0, "gamma must be >= 0"),
            (self.s > 1, "s must be > 1"),
            (int(self.ntrials) >= 1, "ntrials must be >= 1"),
            (int(self.maxit) >= 1, "maxit must be >= 1"),
            (self.epsi > 0, "epsi must be > 0"),
            (int(self.seed) >= 0, "seed must be a nonnegative integer"),
            (self.variant in ("RWG", "RWL"), "variant must be 'RWG' or 'RWL'"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(msg)
        if self.pairs is not None:
            object.__setattr__(self, "pairs", tuple(tuple(int(v) for v in p) for p in self.pairs))

    def focal(self, c: int) -> FocalMatrix:
        return make_focal_matrix(c, self.kind, self.pairs, self.include_omega)

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["pairs"] is not None:
            out["pairs"] = [list(p) for p in out["pairs"]]
        return out


def resolve_params(params: SolverParams | None, overrides: dict) -> SolverParams:
    base = params if params is not None else SolverParams()
    unknown = set(overrides) - set(SolverParams.__dataclass_fields__)
    if unknown:
        raise TypeError(f"unknown solver parameters: {sorted(unknown)}")
    return replace(base, **overrides) if overrides else base


def check_c(c: int, n: int) -> int:
    c = int(c)
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if c > n:
        raise ValueError(f"c={c} exceeds the number of objects n={n}")
    return c


def sample_indices(n: int, c: int, seed: int) -> np.ndarray:
    """``c`` distinct object indices drawn without replacement."""
    return np.random.default_rng(seed).choice(n, size=c, replace=False)


def focal_parts(focal: FocalMatrix):
    """Membership rows and cardinalities of the nonempty focal sets."""
    s = focal.rows[1:].astype(float)
    return s, s.sum(axis=1)


def update_mass(dist: np.ndarray, card: np.ndarray, alpha: float, beta: float, delta2: float) -> np.ndarray:
    """Closed-form optimal masses for fixed distances.

    ``dist`` is ``(n, f-1)`` over the nonempty focal sets. The result has
    ``f`` columns with the empty set first. Objects lying exactly on some
    focal prototype split their mass evenly over those sets.
    """
    n = dist.shape[0]
    e = 1.0 / (beta - 1.0)
    mass = np.zeros((n, dist.shape[1] + 1))

    zero = dist < ZERO_DISTANCE
    exact = zero.any(axis=1)
    if exact.any():
        z = zero[exact].astype(float)
        mass[exact, 1:] = z / z.sum(axis=1, keepdims=True)

    rest = ~exact
    if rest.any():
        logw = np.empty((int(rest.sum()), dist.shape[1] + 1))
        logw[:, 0] = -e * math.log(delta2)
        logw[:, 1:] = -e * (alpha * np.log(card) + np.log(dist[rest]))
        logw -= logw.max(axis=1, keepdims=True)
        w = np.exp(logw)
        mass[rest] = w / w.sum(axis=1, keepdims=True)
    return mass


def objective(mass: np.ndarray, dist: np.ndarray, card: np.ndarray, alpha: float, beta: float, delta2: float) -> float:
    mb = mass**beta
    return float(np.sum(card**alpha * mb[:, 1:] * dist) + delta2 * np.sum(mb[:, 0]))


def solve_prototypes(h: np.ndarray, rhs: np.ndarray, iteration: int) -> np.ndarray:
    try:
        cond = np.linalg.cond(h)
    except np.linalg.LinAlgError:
        cond = math.inf
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularSystemError(iteration, cond)
    return np.linalg.solve(h, rhs)


@dataclass
class RunResult:
    proto: object
    mass: np.ndarray
    criterion: float
    history: list
    n_iter: int
    converged: bool


def alternate(
    proto,
    distances: Callable[[object], np.ndarray],
    update_proto: Callable[[np.ndarray, object, int], object],
    card: np.ndarray,
    alpha: float,
    beta: float,
    delta2: float,
    maxit: int,
    epsi: float,
    label: str = "",
) -> RunResult:
    """Alternate mass and prototype updates starting from ``proto``.

    The returned masses are optimal for the returned prototypes, and
    ``history[t]`` is the criterion right after the ``t``-th mass update.
    Stops when no mass moves by ``epsi`` or more, or after ``maxit`` sweeps.
    """
    mass = None
    history = []
    converged = False
    it = 0
    for it in range(1, maxit + 1):
        if it > 1:
            proto = update_proto(mass, proto, it)
        dist = distances(proto)
        new = update_mass(dist, card, alpha, beta, delta2)
        crit = objective(new, dist, card, alpha, beta, delta2)
        history.append(crit)
        logger.debug("%s iter %d J=%.10g", label, it, crit)
        change = math.inf if mass is None else float(np.max(np.abs(new - mass)))
        mass = new
        if change < epsi:
            converged = True
            break
    return RunResult(proto, mass, history[-1], history, it, converged)


def best_of(trials: list) -> tuple[int, object]:
    """Index and item with the lowest criterion; ties go to the earliest trial."""
    best = min(range(len(trials)), key=lambda t: (trials[t].criterion, t))
    return best, trials[best]
