"""Unordered tree inclusion: decide P ⊂ T and locate every minimal including subtree."""

from .api import ALGOS, decide
from .errors import (InfeasibleSpec, InstanceTimeout, PreconditionError, ResourceCapExceeded,
                     SizeGuardError, TreeIncError, TreeSyntaxError)
from .limits import Counters, Limits
from .result import RunResult, mapping_violations
from .tree import LabeledTree, parse_tree, read_tree, serialize_tree, stats, write_tree

__all__ = [
    "ALGOS",
    "Counters",
    "InfeasibleSpec",
    "InstanceTimeout",
    "LabeledTree",
    "Limits",
    "PreconditionError",
    "ResourceCapExceeded",
    "RunResult",
    "SizeGuardError",
    "TreeIncError",
    "TreeSyntaxError",
    "decide",
    "mapping_violations",
    "parse_tree",
    "read_tree",
    "serialize_tree",
    "stats",
    "write_tree",
]

__version__ = "0.1.0"
