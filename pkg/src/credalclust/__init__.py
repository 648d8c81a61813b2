"""Evidential clustering: credal partitions from attribute, categorical and relational data."""

from ._core import SingularSystemError, SolverError, SolverParams
from .attribute import catecm_fit, ccm_distance, ccm_fit, ecm_fit
from .data import (
    AttributeData,
    CategoricalData,
    DatasetSchema,
    euclidean_distances,
    load_bundled,
    load_csv,
    load_dissimilarity_csv,
    mismatch_distances,
    pca_project,
)
from .focal import FocalMatrix, FrameSpec, make_focal_matrix
from .metrics import PairwiseMass, credal_ri, nonspecificity, pairwise_mass
from .multiview import mecmdd_fit
from .partition import (
    CredalPartition,
    DerivedOutputs,
    HardPartition,
    belief,
    derive,
    extract_mass,
    pignistic,
    plausibility,
    summarize,
)
from .relational import ecmdd_fit, recm_fit

__version__ = "0.1.0"

__all__ = [
    "AttributeData",
    "CategoricalData",
    "CredalPartition",
    "DatasetSchema",
    "DerivedOutputs",
    "FocalMatrix",
    "FrameSpec",
    "HardPartition",
    "PairwiseMass",
    "SingularSystemError",
    "SolverError",
    "SolverParams",
    "belief",
    "catecm_fit",
    "ccm_distance",
    "ccm_fit",
    "credal_ri",
    "derive",
    "ecm_fit",
    "ecmdd_fit",
    "euclidean_distances",
    "extract_mass",
    "load_bundled",
    "load_csv",
    "load_dissimilarity_csv",
    "make_focal_matrix",
    "mecmdd_fit",
    "mismatch_distances",
    "nonspecificity",
    "pairwise_mass",
    "pca_project",
    "pignistic",
    "plausibility",
    "recm_fit",
    "summarize",
]
