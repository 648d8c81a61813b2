"""Imprecision and agreement measures for credal partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RI_TYPES = ("belief", "plausibility")


def nonspecificity(partition, normalize: bool = True) -> float:
    """Average nonspecificity of the objects' mass functions.

    Each mass ``m(A)`` is weighted by ``log2 |A|``; the empty-set mass is
    weighted by ``log2 c``. With ``normalize`` the average is divided by
    ``log2 c`` so it lies in ``[0, 1]``; otherwise it lies in
    ``[0, log2 c]``. A single-cluster frame has nonspecificity 0.
    """
    focal = partition.focal
    if focal.c == 1:
        return 0.0
    card = focal.cardinality.copy()
    card[0] = focal.c
    weights = np.log2(card)
    if normalize:
        weights = weights / np.log2(focal.c)
    per_object = partition.mass @ weights
    return float(max(per_object.mean(), 0.0))


@dataclass(frozen=True)
class PairwiseMass:
    """Relational masses for every pair of objects.

    ``M_e`` is the mass on conflict (at least one object is an outlier),
    ``M_1`` on "same cluster" and ``M_0`` on "different clusters".
    """

    M_e: np.ndarray
    M_1: np.ndarray
    M_0: np.ndarray

    @property
    def ignorance(self) -> np.ndarray:
        return 1.0 - self.M_e - self.M_1 - self.M_0


def pairwise_mass(partition) -> PairwiseMass:
    mass = partition.mass
    focal = partition.focal
    empty = mass[:, 0]
    m_e = empty[:, None] + empty[None, :] - np.outer(empty, empty)

    single = mass[:, focal.singleton_index()]
    m_1 = single @ single.T

    codes = focal.codes
    disjoint = ((codes[:, None] & codes[None, :]) == 0).astype(float)
    disjoint[0, :] = 0.0
    disjoint[:, 0] = 0.0
    m_0 = mass @ disjoint @ mass.T
    # symmetrize round-off from the two matrix products
    m_0 = 0.5 * (m_0 + m_0.T)
    return PairwiseMass(M_e=m_e, M_1=m_1, M_0=m_0)


def _pair_scores(partition, type: str) -> np.ndarray:
    pm = pairwise_mass(partition)
    if type == "belief":
        return pm.M_1
    return 1.0 - pm.M_0 - pm.M_e


def credal_ri(p1, p2, type: str = "belief") -> float:
    """Rand index between two credal partitions of the same objects.

    For each pair the degree of "same cluster" is read from the belief
    (``M_1``) or the plausibility (``1 - M_0 - M_e``) of the pairwise
    mass; agreement is one minus the absolute difference, averaged over
    unordered pairs. On hard partitions both types give the classical
    Rand index.
    """
    if type not in RI_TYPES:
        raise ValueError(f"unknown type {type!r}; expected one of {RI_TYPES}")
    if p1.n != p2.n:
        raise ValueError(f"partitions have different numbers of objects: {p1.n} vs {p2.n}")
    n = p1.n
    if n < 2:
        return 1.0
    iu = np.triu_indices(n, k=1)
    q1 = _pair_scores(p1, type)[iu]
    q2 = _pair_scores(p2, type)[iu]
    return float(np.sum(1.0 - np.abs(q1 - q2)) / len(q1))
