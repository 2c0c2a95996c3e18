# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""ACC detection, transformation and corpus census."""

from .census import CensusReport, census, format_table
from .detector import AccInstance, RejectionCode, RejectionReason, classify, detect_all, find_candidates
from .transformer import TransformRecord, detransform, transform_corpus, transform_instance, transform_tree

__all__ = [
    "AccInstance",
    "CensusReport",
    "RejectionCode",
    "RejectionReason",
    "TransformRecord",
    "census",
    "classify",
    "detect_all",
    "detransform",
    "find_candidates",
    "format_table",
    "transform_corpus",
    "transform_instance",
    "transform_tree",
]
