# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Coordination span metrics and EVALB-style bracket scoring."""

from .coord_eval import (
    ArgSpan,
    Conjunct,
    CoordGold,
    CoordPhrase,
    EvalReport,
    accph_identification,
    argument_recall,
    conjunct_recall,
    evaluate,
    extract_predicted,
    gold_summary,
    internal_given_boundaries,
    parse_gold,
)
from .evalb import BracketScore, labeled_bracket_f1

__all__ = [
    "ArgSpan",
    "BracketScore",
    "Conjunct",
    "CoordGold",
    "CoordPhrase",
    "EvalReport",
    "accph_identification",
    "argument_recall",
    "conjunct_recall",
    "evaluate",
    "extract_predicted",
    "gold_summary",
    "internal_given_boundaries",
    "labeled_bracket_f1",
    "parse_gold",
]
