# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Argument cluster coordination (ACC) treebank toolkit."""

from .acc import (
    AccInstance,
    RejectionCode,
    census,
    classify,
    detect_all,
    detransform,
    find_candidates,
    transform_corpus,
    transform_tree,
)
from .treebank_io import Internal, Leaf, NodeLabel, Tree, parse_trees, read_corpus, serialize, write_corpus

__all__ = [
    "AccInstance",
    "Internal",
    "Leaf",
    "NodeLabel",
    "RejectionCode",
    "Tree",
    "census",
    "classify",
    "detect_all",
    "detransform",
    "find_candidates",
    "parse_trees",
    "read_corpus",
    "serialize",
    "transform_corpus",
    "transform_tree",
    "write_corpus",
]
