"""Frames of discernment and matrices of focal sets.

A focal matrix is an ``(f, c)`` binary array whose row ``j`` encodes the
subset ``A_j`` of the frame ``{w_1, ..., w_c}``. Rows are kept in binary
counting order with ``w_1`` as the least significant bit, so the empty set
is always row 0 and, for ``kind="full"``, row ``r`` is the subset whose
bitmask is ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

KINDS = ("full", "simple", "pairs")


@dataclass(frozen=True)
class FrameSpec:
    """Frame of ``c`` singleton clusters with optional display labels."""

    c: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if int(self.c) < 1:
            raise ValueError(f"c must be >= 1, got {self.c}")
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.c:
                raise ValueError(f"expected {self.c} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise ValueError("cluster labels must be distinct")
            object.__setattr__(self, "labels", labels)

    def label(self, k: int) -> str:
        """Display name of cluster ``k`` (0-based)."""
        return self.labels[k] if self.labels else str(k + 1)


class FocalMatrix:
    """Immutable binary matrix of focal sets in canonical order.

    Parameters
    ----------
    rows : array-like of shape (f, c)
        0/1 entries. Row order must be canonical (increasing bitmask), the
        first row must be the empty set and every singleton must be present.
    """

    __slots__ = ("_rows", "_codes")

    def __init__(self, rows):
        arr = np.asarray(rows)
        if arr.ndim != 2 or arr.shape[0] < 2 or arr.shape[1] < 1:
            raise ValueError(f"focal matrix must be 2-D with at least 2 rows, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("focal matrix entries must be 0 or 1")
        arr = arr.astype(np.int8)
        codes = _bitmask(arr)
        if codes[0] != 0:
            raise ValueError("row 0 of a focal matrix must be the empty set")
        if np.any(np.diff(codes) <= 0):
            raise ValueError("focal rows must be distinct and in canonical (bitmask) order")
        c = arr.shape[1]
        missing = [k + 1 for k in range(c) if (1 << k) not in set(codes.tolist())]
        if missing:
            raise ValueError(f"singletons missing from focal matrix: {missing}")
        arr.setflags(write=False)
        codes.setflags(write=False)
        self._rows = arr
        self._codes = codes

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def c(self) -> int:
        return self._rows.shape[1]

    @property
    def f(self) -> int:
        return self._rows.shape[0]

    @property
    def codes(self) -> np.ndarray:
        """Bitmask of each row (``w_1`` is bit 0)."""
        return self._codes

    @property
    def cardinality(self) -> np.ndarray:
        return self._rows.sum(axis=1).astype(float)

    def singleton_index(self) -> np.ndarray:
        """Row index of ``{w_k}`` for ``k = 0..c-1``."""
        pos = {int(code): j for j, code in enumerate(self._codes)}
        return np.array([pos[1 << k] for k in range(self.c)])

    def index_of(self, members: Iterable[int]) -> int:
        """Row index of the set of 0-based cluster indices ``members``."""
        code = sum(1 << int(k) for k in set(members))
        hits = np.flatnonzero(self._codes == code)
        if hits.size == 0:
            raise KeyError(f"set {sorted(set(members))} is not a focal set")
        return int(hits[0])

    def members(self, j: int) -> tuple[int, ...]:
        """0-based cluster indices contained in focal set ``j``."""
        return tuple(int(k) for k in np.flatnonzero(self._rows[j]))

    def set_string(self, j: int) -> str:
        """Render focal set ``j`` with 1-based cluster numbers, e.g. ``{1,3}``."""
        return "{" + ",".join(str(k + 1) for k in self.members(j)) + "}"

    def tolist(self) -> list[list[int]]:
        return self._rows.astype(int).tolist()

    def __eq__(self, other):
        return isinstance(other, FocalMatrix) and np.array_equal(self._rows, other._rows)

    def __hash__(self):
        return hash(self._rows.tobytes()) ^ hash(self._rows.shape)

    def __repr__(self):
        return f"FocalMatrix(c={self.c}, f={self.f})"


def _bitmask(rows: np.ndarray) -> np.ndarray:
    weights = 1 << np.arange(rows.shape[1], dtype=np.int64)
    return (rows.astype(np.int64) * weights).sum(axis=1)


def _from_codes(codes: Iterable[int], c: int) -> FocalMatrix:
    codes = sorted(set(codes))
    rows = [[(code >> k) & 1 for k in range(c)] for code in codes]
    return FocalMatrix(np.array(rows, dtype=np.int8))


def make_focal_matrix(
    c: int,
    kind: str = "full",
    pairs: Sequence[Sequence[int]] | None = None,
    include_omega: bool = True,
) -> FocalMatrix:
    """Build the matrix of focal sets for ``c`` clusters.

    Parameters
    ----------
    c : int
        Number of singleton clusters.
    kind : {"full", "simple", "pairs"}
        ``full`` enumerates all ``2**c`` subsets; ``simple`` keeps the empty
        set, the singletons and the whole frame; ``pairs`` adds 2-subsets to
        ``simple``.
    pairs : sequence of (int, int), optional
        1-based cluster pairs used with ``kind="pairs"``. All pairs when
        omitted.
    include_omega : bool
        When False the whole frame is dropped, unless it is itself a
        singleton (``c == 1``).

    Returns
    -------
    FocalMatrix
    """
    c = int(c)
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    if kind not in KINDS:
        raise ValueError(f"unknown focal kind {kind!r}; expected one of {KINDS}")
    if pairs is not None and kind != "pairs":
        raise ValueError("pairs may only be given with kind='pairs'")

    omega = (1 << c) - 1
    if kind == "full":
        codes = set(range(1 << c))
    else:
        codes = {0} | {1 << k for k in range(c)} | {omega}
        if kind == "pairs":
            codes |= _pair_codes(c, pairs)
    if not include_omega and c > 1:
        codes.discard(omega)
    return _from_codes(codes, c)


def _pair_codes(c: int, pairs) -> set[int]:
    if pairs is None:
        return {(1 << a) | (1 << b) for a, b in combinations(range(c), 2)}
    seen = set()
    for pair in pairs:
        pair = tuple(pair)
        if len(pair) != 2:
            raise ValueError(f"pair {pair} must have exactly two entries")
        a, b = (int(v) for v in pair)
        if a == b or not (1 <= a <= c and 1 <= b <= c):
            raise ValueError(f"invalid pair {pair}: need two distinct indices in 1..{c}")
        code = (1 << (a - 1)) | (1 << (b - 1))
        if code in seen:
            raise ValueError(f"duplicate pair {pair}")
        seen.add(code)
    return seen
