"""Data containers, CSV ingestion, distance matrices and PCA projection."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist, squareform

MISSING = {"", "na", "nan", "null", "none", "?"}
BUNDLED = ("iris", "fourclass")
DATA_ENV = "CREDALCLUST_DATA"


class DataError(ValueError):
    """Malformed input file or dataset."""


@dataclass(frozen=True)
class AttributeData:
    x: np.ndarray
    columns: tuple[str, ...] = ()
    labels: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class CategoricalData:
    """Integer-coded categorical attributes.

    ``codes[i, q]`` is in ``range(cardinalities[q])``; ``categories[q]``
    maps codes back to the original strings when known.
    """

    codes: np.ndarray
    cardinalities: tuple[int, ...]
    columns: tuple[str, ...] = ()
    categories: tuple[tuple[str, ...], ...] = ()
    labels: np.ndarray | None = None

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if codes.ndim != 2:
            raise DataError(f"codes must be 2-D, got shape {codes.shape}")
        if codes.size and codes.dtype.kind not in "iu":
            raise DataError("categorical codes must be integers")
        cards = tuple(int(k) for k in self.cardinalities)
        if len(cards) != codes.shape[1]:
            raise DataError(f"{len(cards)} cardinalities for {codes.shape[1]} attributes")
        for q, k in enumerate(cards):
            if k < 1:
                raise DataError(f"attribute {q} has cardinality {k}")
            col = codes[:, q]
            if col.size and (col.min() < 0 or col.max() >= k):
                raise DataError(f"attribute {q} has codes outside range({k})")
        object.__setattr__(self, "codes", codes.astype(np.int64))
        object.__setattr__(self, "cardinalities", cards)

    @classmethod
    def from_codes(cls, codes, cardinalities=None) -> "CategoricalData":
        codes = np.asarray(codes, dtype=np.int64)
        if cardinalities is None:
            cardinalities = tuple(int(v) + 1 for v in codes.max(axis=0))
        return cls(codes=codes, cardinalities=tuple(cardinalities))

    @property
    def n(self) -> int:
        return self.codes.shape[0]


@dataclass(frozen=True)
class DatasetSchema:
    """How to read a delimited file.

    ``label`` names (or indexes) a column kept apart from the features.
    ``kind`` is ``"auto"`` (numeric when every feature parses as a number,
    categorical when none does), ``"numeric"`` or ``"categorical"``.
    """

    label: str | int | None = None
    header: bool = True
    delimiter: str = ","
    kind: str = "auto"


def _read_rows(path, delimiter: str) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter)]
    # tolerate trailing blank lines only
    while rows and all(not cell.strip() for cell in rows[-1]):
        rows.pop()
    if not rows:
        raise DataError(f"{path}: file is empty")
    return rows


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, schema: DatasetSchema | None = None):
    """Read a data file into :class:`AttributeData` or :class:`CategoricalData`.

    Missing cells are an error; so are rows whose length differs from the
    first row. Categorical columns are coded by sorted category name.
    """
    schema = schema or DatasetSchema()
    if schema.kind not in ("auto", "numeric", "categorical"):
        raise DataError(f"unknown kind {schema.kind!r}")
    rows = _read_rows(path, schema.delimiter)
    width = len(rows[0])
    if schema.header:
        names = [h.strip() for h in rows[0]]
        body = rows[1:]
        first_line = 2
    else:
        names = [f"V{q + 1}" for q in range(width)]
        body = rows
        first_line = 1
    for r, row in enumerate(body):
        if len(row) != width:
            raise DataError(f"{path}: line {r + first_line} has {len(row)} fields, expected {width}")
    if not body:
        raise DataError(f"{path}: no data rows")

    label_col = None
    if schema.label is not None:
        if isinstance(schema.label, int):
            label_col = schema.label
        elif schema.label in names:
            label_col = names.index(schema.label)
        else:
            raise DataError(f"{path}: label column {schema.label!r} not found in {names}")
        if not 0 <= label_col < width:
            raise DataError(f"{path}: label column index {label_col} out of range")
    features = [q for q in range(width) if q != label_col]
    if not features:
        raise DataError(f"{path}: no feature columns")

    cells = [[row[q].strip() for q in features] for row in body]
    for r, row in enumerate(cells):
        for j, cell in enumerate(row):
            if cell.lower() in MISSING:
                raise DataError(
                    f"{path}: missing value at line {r + first_line}, column {names[features[j]]!r}"
                )
    labels = None if label_col is None else np.array([row[label_col].strip() for row in body])
    columns = tuple(names[q] for q in features)

    numeric = [all(_is_number(row[j]) for row in cells) for j in range(len(features))]
    kind = schema.kind
    if kind == "auto":
        if all(numeric):
            kind = "numeric"
        elif not any(numeric):
            kind = "categorical"
        else:
            mixed = [columns[j] for j, ok in enumerate(numeric) if not ok]
            raise DataError(f"{path}: non-numeric values in columns {mixed}; set kind explicitly")
    if kind == "numeric":
        bad = [columns[j] for j, ok in enumerate(numeric) if not ok]
        if bad:
            raise DataError(f"{path}: non-numeric values in columns {bad}")
        x = np.array([[float(v) for v in row] for row in cells])
        if not np.isfinite(x).all():
            r, j = np.argwhere(~np.isfinite(x))[0]
            raise DataError(f"{path}: non-finite value at line {r + first_line}, column {columns[j]!r}")
        return AttributeData(x=x, columns=columns, labels=labels)

    codes = np.zeros((len(cells), len(features)), dtype=np.int64)
    categories = []
    for j in range(len(features)):
        values = sorted({row[j] for row in cells})
        lookup = {v: t for t, v in enumerate(values)}
        codes[:, j] = [lookup[row[j]] for row in cells]
        categories.append(tuple(values))
    return CategoricalData(
        codes=codes,
        cardinalities=tuple(len(v) for v in categories),
        columns=columns,
        categories=tuple(categories),
        labels=labels,
    )


# -- dissimilarities ------------------------------------------------------


def as_dissimilarity(d, tol: float = 1e-9) -> np.ndarray:
    """Validate a square, symmetric, nonnegative matrix with zero diagonal."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise DataError(f"dissimilarity matrix must be square and non-empty, got shape {d.shape}")
    if not np.isfinite(d).all():
        raise DataError("dissimilarity matrix has non-finite entries")
    if (d < -tol).any():
        i, j = np.argwhere(d < -tol)[0]
        raise DataError(f"negative dissimilarity {d[i, j]:.6g} at ({i}, {j})")
    asym = np.abs(d - d.T)
    if asym.max() > tol:
        i, j = np.unravel_index(asym.argmax(), asym.shape)
        raise DataError(f"dissimilarity matrix is not symmetric at ({i}, {j})")
    if np.abs(np.diag(d)).max() > tol:
        raise DataError("dissimilarity matrix must have a zero diagonal")
    return d


def euclidean_distances(x, squared: bool = False) -> np.ndarray:
    x = np.asarray(getattr(x, "x", x), dtype=float)
    return squareform(pdist(x, "sqeuclidean" if squared else "euclidean"))


def mismatch_distances(data) -> np.ndarray:
    """Number of attributes on which each pair of objects differs."""
    codes = np.asarray(getattr(data, "codes", data))
    return (codes[:, None, :] != codes[None, :, :]).sum(axis=2).astype(float)


def load_dissimilarity_csv(path, delimiter: str = ",") -> np.ndarray:
    """Read a square dissimilarity matrix.

    A header row and a leading label column are detected when their cells
    are not numeric (a blank top-left cell counts as a label).
    """
    rows = _read_rows(path, delimiter)
    # the last row is never a header, so it tells whether labels lead each row
    if not _is_number(rows[-1][0].strip()):
        rows = [row[1:] for row in rows]
    if any(not _is_number(cell.strip()) for cell in rows[0]):
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no numeric rows")
    n = len(rows)
    for r, row in enumerate(rows):
        if len(row) != n:
            raise DataError(f"{path}: row {r + 1} has {len(row)} values, expected {n} for a square matrix")
    try:
        d = np.array([[float(cell) for cell in row] for row in rows])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None
    return as_dissimilarity(d)


# -- PCA ------------------------------------------------------------------


@dataclass(frozen=True)
class Projection:
    coords: np.ndarray
    explained: np.ndarray
    components: np.ndarray


def pca_project(x, dims: int = 2, normalize: bool = False, columns=None) -> Projection:
    """Project rows onto the leading principal axes.

    Columns are centered (and scaled to unit variance when ``normalize``).
    Each axis is oriented so its largest-magnitude loading is positive.
    ``explained`` holds the fraction of total variance per axis.
    """
    columns = columns or getattr(x, "columns", None)
    x = np.asarray(getattr(x, "x", x), dtype=float)
    n, p = x.shape
    if n < 2:
        raise DataError("PCA needs at least two objects")
    if not 1 <= dims <= p:
        raise DataError(f"dims must be in 1..{p}, got {dims}")
    z = x - x.mean(axis=0)
    if normalize:
        sd = z.std(axis=0, ddof=1)
        flat = np.flatnonzero(sd == 0)
        if flat.size:
            name = columns[flat[0]] if columns else f"column {flat[0]}"
            raise DataError(f"cannot normalize zero-variance feature {name}")
        z = z / sd
    cov = z.T @ z / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    lead = np.argmax(np.abs(evecs), axis=0)
    evecs = evecs * np.sign(evecs[lead, np.arange(p)])
    total = evals.sum()
    explained = evals / total if total > 0 else np.zeros(p)
    comps = evecs[:, :dims]
    return Projection(coords=z @ comps, explained=explained[:dims], components=comps.T)


# -- bundled datasets -----------------------------------------------------


def _dataset_path(name: str) -> Path:
    fname = f"{name}.csv"
    extra = os.environ.get(DATA_ENV)
    if extra and (Path(extra) / fname).is_file():
        return Path(extra) / fname
    path = Path(str(resources.files("credalclust") / "datasets" / fname))
    if path.is_file():
        return path
    raise DataError(
        f"dataset {name!r} is not shipped with this installation; place {fname} "
        f"(feature columns plus a 'label' column) in the directory named by ${DATA_ENV}"
    )


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise DataError(f"unknown dataset {name!r}; available: {', '.join(BUNDLED)}")
    return _dataset_path(name)


def load_bundled(name: str) -> AttributeData:
    """Load ``iris`` (150 x 4, species labels) or ``fourclass`` (2 features)."""
    path = bundled_path(name)
    label = "species" if name == "iris" else "label"
    return load_csv(path, DatasetSchema(label=label))
