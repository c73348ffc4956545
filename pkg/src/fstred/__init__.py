"""Intermediate-alphabet reduction for cascades of finite-state transducers.

The toolkit merges interchangeable symbols on the tape between adjacent
transducers of a cascade, shrinking arcs and alphabets while provably
preserving the relation the cascade as a whole computes.
"""

from .core import (Arc, BadSymbolText, Cascade, EPSILON, EPSILON_TEXT, EmptyFst,
                   Fst, FstError, FstStats, IllegalUnknownOutput,
                   InvalidStateIndex, ReservedSymbolInAlphabet, Symbol, UNKNOWN,
                   UNKNOWN_TEXT, effective_alphabets, fst_stats, is_reserved,
                   make_fst, matches)
from .engine import (ApplyResult, DEFAULT_LIMITS, Limits, PROBE_TEXT, Relation,
                     RelationComparison, ReservedInputToken, TruncatedRelation,
                     apply_cascade, apply_fst, enumerate_relation,
                     relations_equal)
from .gen import GenParams, SplitMix64, random_cascade
from .reduce import (Partition, ReductionReport, ReservedCandidate,
                     compute_partition, eligible_candidates, reduce_cascade,
                     reduce_pair, relabel_input_side, relabel_output_side,
                     signature)
from .textio import (Manifest, ParseError, parse_fst, parse_manifest,
                     serialize_fst, serialize_manifest, write_report)

__version__ = "0.1.0"

__all__ = [
    "Arc", "ApplyResult", "BadSymbolText", "Cascade", "DEFAULT_LIMITS",
    "EPSILON", "EPSILON_TEXT", "EmptyFst", "Fst", "FstError", "FstStats",
    "GenParams", "IllegalUnknownOutput", "InvalidStateIndex", "Limits",
    "Manifest", "PROBE_TEXT", "ParseError", "Partition", "ReductionReport",
    "Relation", "RelationComparison", "ReservedCandidate",
    "ReservedInputToken", "ReservedSymbolInAlphabet", "SplitMix64", "Symbol",
    "TruncatedRelation", "UNKNOWN", "UNKNOWN_TEXT", "apply_cascade",
    "apply_fst", "compute_partition", "effective_alphabets",
    "eligible_candidates", "enumerate_relation", "fst_stats", "is_reserved",
    "make_fst", "matches", "parse_fst", "parse_manifest", "random_cascade",
    "reduce_cascade", "reduce_pair", "relabel_input_side",
    "relabel_output_side", "relations_equal", "serialize_fst",
    "serialize_manifest", "signature", "write_report",
]
