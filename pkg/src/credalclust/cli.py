"""Command-line interface.

Subcommands: ``run``, ``summary``, ``metrics``, ``compare`` and ``plotdata``.
Exit status is 0 on success, 1 when a solver fails and 2 for usage,
configuration or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

import numpy as np

from . import partition as cp
from ._core import SolverError, SolverParams
from .attribute import catecm_fit, ccm_fit, ecm_fit
from .data import (
    BUNDLED,
    CategoricalData,
    DataError,
    DatasetSchema,
    bundled_path,
    euclidean_distances,
    load_csv,
    load_dissimilarity_csv,
    mismatch_distances,
    pca_project,
)
from .metrics import RI_TYPES, credal_ri, nonspecificity
from .multiview import mecmdd_fit
from .relational import ecmdd_fit, recm_fit

ALGOS = ("ecm", "ccm", "catecm", "recm", "ecmdd", "mecmdd")
RELATIONAL = ("recm", "ecmdd", "mecmdd")


class UsageError(Exception):
    pass


def _pairs(text: str):
    out = []
    for item in text.split(","):
        try:
            a, b = item.split("-")
            out.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad pair {item!r}; use e.g. 1-2,2-3") from None
    return out


def _schema_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--label", help="name of a label column to drop from the features")
    p.add_argument("--no-header", action="store_true", help="the data file has no header row")
    p.add_argument("--delimiter", default=",")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="credalclust", description="Evidential clustering with credal partitions.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="fit a solver and write the credal partition as JSON")
    run.add_argument("--algo", required=True, choices=ALGOS)
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", action="append", help="data or dissimilarity CSV (repeat for mecmdd views)")
    src.add_argument("--dataset", choices=BUNDLED, help="bundled dataset")
    run.add_argument("--distance", action="store_true", help="inputs are dissimilarity matrices")
    run.add_argument("--categorical", action="store_true", help="treat every feature as categorical")
    _schema_args(run)
    run.add_argument("--clusters", "-c", type=int, required=True)
    run.add_argument("--focal", choices=("full", "simple", "pairs"), default="full")
    run.add_argument("--pairs", type=_pairs, help="cluster pairs for --focal pairs, e.g. 1-2,2-3")
    run.add_argument("--no-omega", action="store_true", help="drop the whole frame from the focal sets")
    defaults = SolverParams()
    run.add_argument("--alpha", type=float, default=defaults.alpha)
    run.add_argument("--beta", type=float, default=defaults.beta)
    run.add_argument("--delta", type=float, default=defaults.delta)
    run.add_argument("--deltas", type=lambda t: [float(v) for v in t.split(",")],
                     help="per-view deltas for mecmdd, comma separated")
    run.add_argument("--gamma", type=float, default=defaults.gamma)
    run.add_argument("--s", type=float, default=defaults.s, help="view-weight exponent (mecmdd)")
    run.add_argument("--variant", choices=("RWG", "RWL"), default=defaults.variant)
    run.add_argument("--ntrials", type=int, default=defaults.ntrials)
    run.add_argument("--maxit", type=int, default=defaults.maxit)
    run.add_argument("--epsi", type=float, default=defaults.epsi)
    run.add_argument("--seed", type=int, default=defaults.seed)
    run.add_argument("--output", "-o", help="output JSON path (stdout when omitted)")
    run.add_argument("--verbose", "-v", action="store_true", help="log iterations to stderr")

    summ = sub.add_parser("summary", help="print a summary of a credal partition")
    summ.add_argument("partition")

    met = sub.add_parser("metrics", help="print uncertainty measures of a credal partition")
    met.add_argument("partition")

    cmp_ = sub.add_parser("compare", help="credal Rand index between two partitions")
    cmp_.add_argument("a")
    cmp_.add_argument("b")
    cmp_.add_argument("--type", choices=RI_TYPES, default="belief")

    plot = sub.add_parser("plotdata", help="export PCA coordinates with cluster assignments as CSV")
    plot.add_argument("data")
    plot.add_argument("partition")
    plot.add_argument("output")
    plot.add_argument("--normalize", action="store_true", help="standardize features before PCA")
    _schema_args(plot)
    return parser


def _schema(args, kind="auto") -> DatasetSchema:
    return DatasetSchema(label=args.label, header=not args.no_header, delimiter=args.delimiter, kind=kind)


def _load_inputs(args):
    if args.dataset:
        label = args.label or ("species" if args.dataset == "iris" else "label")
        paths = [bundled_path(args.dataset)]
        schema = DatasetSchema(label=label)
    else:
        paths = args.input
        schema = _schema(args, "categorical" if args.categorical else "auto")
    if args.distance:
        if args.algo not in RELATIONAL:
            raise UsageError(f"--distance requires one of {RELATIONAL}")
        return [load_dissimilarity_csv(p, args.delimiter) for p in paths]
    return [load_csv(p, schema) for p in paths]


def _to_dissimilarity(data, algo):
    if isinstance(data, np.ndarray):
        return data
    if isinstance(data, CategoricalData):
        return mismatch_distances(data)
    return euclidean_distances(data, squared=(algo == "recm"))


def _fit(args, inputs):
    params = SolverParams(
        alpha=args.alpha, beta=args.beta, delta=args.delta, gamma=args.gamma, s=args.s,
        ntrials=args.ntrials, maxit=args.maxit, epsi=args.epsi, seed=args.seed,
        kind=args.focal, pairs=args.pairs, include_omega=not args.no_omega, variant=args.variant,
    )
    c = args.clusters
    algo = args.algo
    if algo != "mecmdd" and len(inputs) != 1:
        raise UsageError(f"{algo} takes exactly one --input")
    if algo == "mecmdd":
        return mecmdd_fit([_to_dissimilarity(d, algo) for d in inputs], c, params, deltas=args.deltas)
    data = inputs[0]
    if algo in RELATIONAL:
        fit = recm_fit if algo == "recm" else ecmdd_fit
        return fit(_to_dissimilarity(data, algo), c, params)
    if algo == "catecm":
        if not isinstance(data, CategoricalData):
            raise UsageError("catecm needs categorical data (use --categorical)")
        return catecm_fit(data, c, params)
    if isinstance(data, CategoricalData):
        raise UsageError(f"{algo} needs numeric data; use catecm for categorical features")
    return (ecm_fit if algo == "ecm" else ccm_fit)(data, c, params)


def cmd_run(args) -> int:
    if args.verbose:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        log = logging.getLogger("credalclust")
        log.addHandler(handler)
        log.setLevel(logging.DEBUG)
    try:
        inputs = _load_inputs(args)
        result = _fit(args, inputs)
    except SolverError as exc:
        print(f"credalclust run: solver failed during {args.algo} fit: {exc}", file=sys.stderr)
        return 1
    text = cp.dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_summary(args) -> int:
    print(cp.summarize(cp.load(args.partition)).render())
    return 0


def metrics_lines(part: cp.CredalPartition) -> list[str]:
    derived = cp.derive(part)
    sizes = np.bincount(derived.y_pl.labels, minlength=part.c + 1)[1:]
    return [
        f"n = {part.n}",
        f"c = {part.c}",
        f"criterion = {part.criterion!r}",
        f"nonspecificity = {nonspecificity(part)!r}",
        f"nonspecificity_unnormalized = {nonspecificity(part, normalize=False)!r}",
        f"outliers = {len(derived.outliers)}",
        "hard_cluster_sizes = " + " ".join(str(int(v)) for v in sizes),
    ]


def cmd_metrics(args) -> int:
    print("\n".join(metrics_lines(cp.load(args.partition))))
    return 0


def cmd_compare(args) -> int:
    a, b = cp.load(args.a), cp.load(args.b)
    if a.n != b.n:
        raise UsageError(f"partitions describe different numbers of objects ({a.n} vs {b.n})")
    print(f"{credal_ri(a, b, args.type):.6f}")
    return 0


def plot_rows(data, part: cp.CredalPartition, normalize: bool) -> str:
    proj = pca_project(data, dims=2, normalize=normalize)
    derived = cp.derive(part)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["pc1", "pc2", "hard_label", "argmax_focal", "max_mass"])
    for i in range(part.n):
        j = int(derived.argmax_focal[i])
        writer.writerow([
            repr(float(proj.coords[i, 0])),
            repr(float(proj.coords[i, 1])),
            int(derived.y_pl.labels[i]),
            part.focal.set_string(j),
            repr(float(part.mass[i, j])),
        ])
    return buf.getvalue()


def cmd_plotdata(args) -> int:
    data = load_csv(args.data, _schema(args, "numeric"))
    part = cp.load(args.partition)
    if data.n != part.n:
        raise UsageError(f"data has {data.n} rows but the partition has {part.n} objects")
    if data.x.shape[1] < 2:
        raise UsageError("plot data needs at least two numeric features")
    text = plot_rows(data, part, args.normalize)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return 0


COMMANDS = {
    "run": cmd_run,
    "summary": cmd_summary,
    "metrics": cmd_metrics,
    "compare": cmd_compare,
    "plotdata": cmd_plotdata,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DataError, cp.PartitionError, ValueError, OSError) as exc:
        print(f"credalclust {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
