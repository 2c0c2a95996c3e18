# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Constants used across the ACC toolkit."""
from typing import Any

import immutabledict


# Treebank conventions.
treebank_constants: immutabledict.immutabledict[str, Any] = (
    immutabledict.immutabledict(
        {
            # POS tag of empty elements (traces, elided subjects).
            "empty_pos": "-NONE-",
            # Categories that contain '-' but are never decomposed.
            "atomic_categories": frozenset(
                {"-NONE-", "-LRB-", "-RRB-", "-LCB-", "-RCB-", "-LSB-", "-RSB-"}
            ),
            # Prefix shared by every verbal POS tag (VB, VBD, VBG, VBN, VBP, VBZ).
            "verb_prefix": "VB",
            # POS tag of coordinating conjunctions.
            "cc_pos": "CC",
            # POS tag of the comma separator.
            "comma_pos": ",",
            # Function tag marking grammatical subjects.
            "subject_tag": "SBJ",
        }
    )
)

# Parameters of the ACC representation.
acc_constants: immutabledict.immutabledict[str, Any] = (
    immutabledict.immutabledict(
        {
            # Conjunction tokens that qualify an ACC coordination (lower-cased).
            "conjunction_tokens": frozenset({"and", "or"}),
            # Label prefix of a single argument cluster.
            "cluster_prefix": "ACC_",
            # Label prefix of the coordination-level phrase.
            "phrase_prefix": "ACCPH_",
            # Head priority for the coordination-level label.
            "head_priority": ("NP", "PP", "ADJP", "SBAR"),
            # Category that adds a suffix instead of heading the phrase.
            "suffix_category": "ADVP",
            # Category of conjoined verb phrases.
            "vp_category": "VP",
            # Category of clauses that may carry an empty subject.
            "clause_category": "S",
            "subject_category": "NP",
        }
    )
)

# Coordination evaluation.
eval_constants: immutabledict.immutabledict[str, Any] = (
    immutabledict.immutabledict(
        {
            # Punctuation POS tags trimmed from conjunct edges and ignored by EVALB.
            "punctuation_pos": frozenset({",", ".", ":", "``", "''"}),
            # Words opening a coordination (both X and Y); never conjuncts themselves.
            "preconjunction_tokens": frozenset({"both", "either", "neither"}),
            # Gold markup symbols.
            "conjunct_open": "(",
            "conjunct_close": ")",
            "arg_open": "[",
            "arg_close": "]",
            # Tokens allowed between two conjuncts of the same gold phrase.
            "gold_separators": frozenset(
                {",", ";", "and", "or", "but", "nor", "then"}
            ),
            # Metric names accepted by the `eval` subcommand.
            "metrics": (
                "conjuncts",
                "conjuncts-acc",
                "args",
                "internal",
                "accph",
                "accph-strict",
                "evalb",
            ),
        }
    )
)

# PCFG lab.
pcfg_constants: immutabledict.immutabledict[str, Any] = (
    immutabledict.immutabledict(
        {
            # Start symbol wrapped around every training tree.
            "start_symbol": "TOP",
            # Lexicon symbol standing for any unseen token.
            "unk_token": "<UNK>",
            # Marks binarized intermediate symbols, e.g. VP@<NP-PP>; never part of a PTB label.
            "intermediate_mark": "@",
            # Tolerance of the per-lhs normalisation check.
            "normalisation_tolerance": 1e-9,
        }
    )
)

# Environment variables read by utils.config.
env_keys: immutabledict.immutabledict[str, str] = immutabledict.immutabledict(
    {
        "color": "ACC_TREEKIT_COLOR",
        "jobs": "ACC_TREEKIT_JOBS",
        "log_level": "ACC_TREEKIT_LOG_LEVEL",
        "ptb_dir": "ACC_TREEKIT_PTB_DIR",
    }
)
