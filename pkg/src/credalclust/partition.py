"""Credal partitions and the quantities derived from them.

A credal partition stores one mass function per object as a row of an
``(n, f)`` matrix whose columns follow a :class:`~credalclust.focal.FocalMatrix`.
Column 0 always holds the mass of the empty set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .focal import FocalMatrix
from . import metrics

FORMAT_VERSION = 1
ROW_SUM_TOL = 1e-9
RENORMALIZE_TOL = 1e-6


class PartitionError(ValueError):
    """Raised for malformed mass matrices or partition documents."""


@dataclass(frozen=True)
class CredalPartition:
    """An ``(n, f)`` row-stochastic mass matrix over a set of focal sets.

    ``prototypes`` depends on the solver: a ``(c, p)`` array of centers,
    medoid indices, barycentric weights over objects, or categorical
    frequency profiles. ``diagnostics`` holds solver bookkeeping such as
    the per-sweep criterion history; it never affects derived outputs.
    """

    mass: np.ndarray
    focal: FocalMatrix
    criterion: float = math.nan
    method: str = ""
    params: dict = field(default_factory=dict)
    prototypes: Any = None
    view_weights: np.ndarray | None = None
    seed: int | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        mass = np.array(self.mass, dtype=float)
        if mass.ndim != 2 or mass.shape[1] != self.focal.f:
            raise PartitionError(
                f"mass has shape {mass.shape}, expected (n, {self.focal.f}) for this focal matrix"
            )
        if mass.shape[0] < 1:
            raise PartitionError("a credal partition needs at least one object")
        if not np.isfinite(mass).all():
            raise PartitionError("mass contains non-finite entries")
        if (mass < 0).any():
            raise PartitionError(f"negative mass {mass.min():.3g}")
        dev = np.abs(mass.sum(axis=1) - 1.0)
        if dev.max() > ROW_SUM_TOL:
            i = int(dev.argmax())
            raise PartitionError(f"row {i} of mass sums to {mass[i].sum():.12g}, not 1")
        mass.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "criterion", float(self.criterion))
        if self.view_weights is not None:
            w = np.array(self.view_weights, dtype=float)
            w.setflags(write=False)
            object.__setattr__(self, "view_weights", w)

    @property
    def n(self) -> int:
        return self.mass.shape[0]

    @property
    def c(self) -> int:
        return self.focal.c

    @property
    def f(self) -> int:
        return self.focal.f


@dataclass(frozen=True)
class HardPartition:
    """Crisp assignment; ``labels`` are 1-based cluster numbers."""

    labels: np.ndarray
    c: int

    @property
    def u(self) -> np.ndarray:
        """Indicator matrix with ``u[i, k] = 1`` iff object ``i`` is in cluster ``k + 1``."""
        out = np.zeros((len(self.labels), self.c), dtype=int)
        out[np.arange(len(self.labels)), np.asarray(self.labels) - 1] = 1
        return out


@dataclass(frozen=True)
class DerivedOutputs:
    bel: np.ndarray
    pl: np.ndarray
    contour: np.ndarray
    betp: np.ndarray
    y_pl: HardPartition
    y_bel: HardPartition
    y_betp: HardPartition
    argmax_focal: np.ndarray
    lower_approx: tuple[tuple[int, ...], ...]
    upper_approx: tuple[tuple[int, ...], ...]
    outliers: tuple[int, ...]
    nonspecificity: float


def _subset_matrix(focal: FocalMatrix) -> np.ndarray:
    """``S[b, j] = 1`` iff nonempty ``A_b`` is a subset of ``A_j``."""
    codes = focal.codes
    s = (codes[:, None] & ~codes[None, :]) == 0
    s[0, :] = False
    return s.astype(float)


def _intersect_matrix(focal: FocalMatrix) -> np.ndarray:
    codes = focal.codes
    return ((codes[:, None] & codes[None, :]) != 0).astype(float)


def belief(partition: CredalPartition) -> np.ndarray:
    """``Bel_i(A_j)``: total mass of the nonempty focal sets included in ``A_j``.

    The empty set is excluded, so ``Bel_i(A)`` is not ``1 - Pl_i(not A)``
    when ``m_i(emptyset) > 0``.
    """
    return partition.mass @ _subset_matrix(partition.focal)


def plausibility(partition: CredalPartition) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(pl, contour)``.

    ``pl[i, j]`` is the mass of the focal sets meeting ``A_j`` and
    ``contour[i, k]`` the plausibility of the singleton ``{w_k}``.
    """
    pl = partition.mass @ _intersect_matrix(partition.focal)
    contour = partition.mass @ partition.focal.rows.astype(float)
    return pl, contour


def _betp(mass: np.ndarray, focal: FocalMatrix) -> np.ndarray:
    card = focal.cardinality[1:]
    share = (mass[:, 1:] / card) @ focal.rows[1:].astype(float)
    conflict = 1.0 - mass[:, 0]
    out = np.zeros_like(share)
    ok = conflict > 0
    out[ok] = share[ok] / conflict[ok, None]
    return out


def pignistic(partition: CredalPartition) -> np.ndarray:
    """Pignistic probabilities, ``(n, c)``, after discarding the empty-set mass."""
    bad = np.flatnonzero(partition.mass[:, 0] >= 1.0)
    if bad.size:
        raise PartitionError(
            f"pignistic transform undefined: object {int(bad[0])} has all its mass on the empty set"
        )
    return _betp(partition.mass, partition.focal)


def _hard(scores: np.ndarray) -> HardPartition:
    return HardPartition(labels=np.argmax(scores, axis=1) + 1, c=scores.shape[1])


def derive(partition: CredalPartition) -> DerivedOutputs:
    """Compute every derived output of a credal partition.

    Objects whose whole mass is on the empty set get an all-zero pignistic
    row and are labelled 1 by ``y_betp``.
    """
    focal = partition.focal
    bel = belief(partition)
    pl, contour = plausibility(partition)
    betp = _betp(partition.mass, focal)
    single = focal.singleton_index()

    top = np.argmax(partition.mass, axis=1)
    rows = focal.rows
    lower = tuple(tuple(np.flatnonzero(top == single[k]).tolist()) for k in range(focal.c))
    upper = tuple(tuple(np.flatnonzero(rows[top, k] == 1).tolist()) for k in range(focal.c))
    outliers = tuple(np.flatnonzero(top == 0).tolist())

    return DerivedOutputs(
        bel=bel,
        pl=pl,
        contour=contour,
        betp=betp,
        y_pl=_hard(contour),
        y_bel=_hard(bel[:, single]),
        y_betp=_hard(betp),
        argmax_focal=top,
        lower_approx=lower,
        upper_approx=upper,
        outliers=outliers,
        nonspecificity=metrics.nonspecificity(partition),
    )


def extract_mass(mass, focal: FocalMatrix, method: str = "", criterion: float = math.nan, **extras):
    """Assemble a :class:`CredalPartition` and its :class:`DerivedOutputs`.

    Rows whose sum is within 1e-6 of one are rescaled; anything further off
    is rejected.
    """
    mass = np.array(mass, dtype=float)
    if mass.ndim != 2 or mass.shape[1] != focal.f:
        raise PartitionError(f"mass has shape {mass.shape}, expected (n, {focal.f})")
    sums = mass.sum(axis=1)
    dev = np.abs(sums - 1.0)
    if dev.size and dev.max() > RENORMALIZE_TOL:
        i = int(dev.argmax())
        raise PartitionError(f"row {i} of mass sums to {sums[i]:.9g}; tolerance is {RENORMALIZE_TOL}")
    mass = mass / sums[:, None]
    part = CredalPartition(mass=mass, focal=focal, criterion=criterion, method=method, **extras)
    return part, derive(part)


# -- summary --------------------------------------------------------------


@dataclass(frozen=True)
class Summary:
    c: int
    n: int
    method: str
    focal: list
    criterion: float
    nonspecificity: float
    prototypes: Any
    n_outliers: int

    def render(self) -> str:
        with np.printoptions(precision=8, suppress=True):
            focal = str(np.array(self.focal))
            protos = "None" if self.prototypes is None else _render_prototypes(self.prototypes)
        return "\n".join(
            [
                "------ Credal partition ------",
                f"{self.c} classes,",
                f"{self.n} objects",
                f"Generated by {self.method}",
                "Focal sets:",
                focal,
                f"Value of the criterion = {self.criterion:.2f}",
                f"Nonspecificity = {self.nonspecificity:.2f}",
                "Prototypes:",
                protos,
                f"Number of outliers = {self.n_outliers}",
            ]
        )


def _render_prototypes(protos) -> str:
    try:
        return str(np.asarray(protos, dtype=float) if not _is_int_like(protos) else np.asarray(protos))
    except (ValueError, TypeError):
        return json.dumps(_jsonable(protos))


def _is_int_like(obj) -> bool:
    try:
        arr = np.asarray(obj)
    except (ValueError, TypeError):
        return False
    return arr.dtype.kind in "iu"


def summarize(partition: CredalPartition) -> Summary:
    derived = derive(partition)
    return Summary(
        c=partition.c,
        n=partition.n,
        method=partition.method,
        focal=partition.focal.tolist(),
        criterion=partition.criterion,
        nonspecificity=derived.nonspecificity,
        prototypes=partition.prototypes,
        n_outliers=len(derived.outliers),
    )


# -- persistence ----------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def to_dict(partition: CredalPartition) -> dict:
    doc = {
        "version": FORMAT_VERSION,
        "method": partition.method,
        "c": partition.c,
        "n": partition.n,
        "focal": partition.focal.tolist(),
        "mass": partition.mass.tolist(),
        "criterion": partition.criterion,
        "params": _jsonable(partition.params),
        "prototypes": _jsonable(partition.prototypes),
        "seed": partition.seed,
    }
    if partition.view_weights is not None:
        doc["view_weights"] = partition.view_weights.tolist()
    if partition.diagnostics:
        doc["diagnostics"] = _jsonable(partition.diagnostics)
    return doc


def dumps(partition: CredalPartition) -> str:
    return json.dumps(to_dict(partition), indent=1) + "\n"


def _restore(obj):
    if obj is None or not isinstance(obj, list):
        return obj
    try:
        arr = np.asarray(obj)
    except ValueError:
        return [_restore(v) for v in obj]
    if arr.dtype == object:
        return [_restore(v) for v in obj]
    return arr


def from_dict(doc: dict) -> CredalPartition:
    """Rebuild a partition from its JSON document; unknown fields are ignored."""
    if not isinstance(doc, dict):
        raise PartitionError("partition document must be a JSON object")
    try:
        version = doc["version"]
        focal = FocalMatrix(doc["focal"])
        mass = np.asarray(doc["mass"], dtype=float)
    except KeyError as exc:
        raise PartitionError(f"partition document lacks field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise PartitionError(f"malformed partition document: {exc}") from None
    if version != FORMAT_VERSION:
        raise PartitionError(f"unsupported partition format version {version!r}")
    if "c" in doc and doc["c"] != focal.c:
        raise PartitionError(f"field c={doc['c']} disagrees with focal matrix width {focal.c}")
    if "n" in doc and mass.ndim == 2 and doc["n"] != mass.shape[0]:
        raise PartitionError(f"field n={doc['n']} disagrees with {mass.shape[0]} mass rows")
    criterion = doc.get("criterion")
    weights = doc.get("view_weights")
    return CredalPartition(
        mass=mass,
        focal=focal,
        criterion=math.nan if criterion is None else criterion,
        method=doc.get("method", ""),
        params=doc.get("params") or {},
        prototypes=_restore(doc.get("prototypes")),
        view_weights=None if weights is None else np.asarray(weights, dtype=float),
        seed=doc.get("seed"),
        diagnostics=doc.get("diagnostics") or {},
    )


def loads(text: str) -> CredalPartition:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PartitionError(f"invalid JSON: {exc}") from None
    return from_dict(doc)


def save(partition: CredalPartition, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(partition))


def load(path) -> CredalPartition:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
