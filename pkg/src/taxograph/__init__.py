"""Extensible cluster-graph taxonomy for open-set sound scene labels."""

__version__ = "0.1.0"

from .cuts import CutSelector, SubGraph, cut, encode_labels, export_label_vector, intersect, union
from .dcase import GoldenSets, build_dcase, default_records, default_thesaurus, golden_diff, golden_sets, init_dcase
from .errors import (
    EmptyLabel,
    GoldenMismatch,
    InvalidGraph,
    ParseError,
    SubsetNameCollision,
    SynonymConflict,
    TaxographError,
    UnknownCluster,
    UnknownFormatVersion,
    UnknownLabel,
)
from .formats import dumps_document, export_edges, import_edges, loads_document
from .framework import CurationRecord, CurationReport, merge_label_set, process_label
from .graph import (
    Cluster,
    Outcome,
    SubsetKind,
    TaxonomyGraph,
    ValidationIssue,
    add_edge,
    distance,
    insert_label,
    neighbors,
    validate,
)
from .labels import DecompositionRule, Label, decompose, normalize
from .thesaurus import Synset, Thesaurus, are_synonyms, resolve

__all__ = [
    "Cluster",
    "CurationRecord",
    "CurationReport",
    "CutSelector",
    "DecompositionRule",
    "EmptyLabel",
    "GoldenMismatch",
    "GoldenSets",
    "InvalidGraph",
    "Label",
    "Outcome",
    "ParseError",
    "SubGraph",
    "SubsetKind",
    "SubsetNameCollision",
    "Synset",
    "SynonymConflict",
    "TaxographError",
    "TaxonomyGraph",
    "Thesaurus",
    "UnknownCluster",
    "UnknownFormatVersion",
    "UnknownLabel",
    "ValidationIssue",
    "add_edge",
    "are_synonyms",
    "build_dcase",
    "cut",
    "decompose",
    "default_records",
    "default_thesaurus",
    "distance",
    "dumps_document",
    "encode_labels",
    "export_edges",
    "export_label_vector",
    "golden_diff",
    "golden_sets",
    "import_edges",
    "init_dcase",
    "insert_label",
    "intersect",
    "loads_document",
    "merge_label_set",
    "neighbors",
    "normalize",
    "process_label",
    "resolve",
    "union",
    "validate",
]
