"""Path semigroups, loop groups and graded operator nets over finite posets."""

from .errors import GradedNetsError
from .poset import Poset, build_poset, maximal_directed_subsets
from .paths import PathClass, PathSeq, Verdict, equivalent, parse_path, reduce

__version__ = "0.1.0"

__all__ = [
    "GradedNetsError", "PathClass", "PathSeq", "Poset", "Verdict", "build_poset",
    "equivalent", "maximal_directed_subsets", "parse_path", "reduce",
]
