# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Desk-scale PCFG extraction and CKY parsing."""

from .cky import ParseResult, cky_best, cky_parse
from .grammar import Grammar, LexEntry, Rule, RuleDiff, extract_grammar, lexicon_for, rule_diff, rules_for

__all__ = [
    "Grammar",
    "LexEntry",
    "ParseResult",
    "Rule",
    "RuleDiff",
    "cky_best",
    "cky_parse",
    "extract_grammar",
    "lexicon_for",
    "rule_diff",
    "rules_for",
]
