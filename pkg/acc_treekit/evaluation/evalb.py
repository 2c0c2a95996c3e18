# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""EVALB-style labeled bracket scoring."""

import collections
import logging
from typing import NamedTuple, Sequence

from acc_treekit.acc.detector import find_candidates
from acc_treekit.constants import acc_constants, eval_constants
from acc_treekit.errors import EmptyCorpusError, TokenMismatchError
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    Tree,
    iter_nodes,
    remove_empty_elements,
    strip_annotations,
    yield_tokens,
)

logger = logging.getLogger(__name__)

Bracket = tuple[str, int, int]


class BracketScore(NamedTuple):
    precision: float
    recall: float
    f1: float


def _prepare(tree: Tree) -> Tree | None:
    return remove_empty_elements(strip_annotations(tree))


def brackets(tree: Tree) -> collections.Counter[Bracket]:
    """Labeled spans over non-punctuation tokens, root and preterminals excluded."""
    prepared = _prepare(tree)
    found: collections.Counter[Bracket] = collections.Counter()
    if prepared is None:
        return found

    def visit(node: Tree, start: int, is_root: bool) -> int:
        if isinstance(node, Leaf):
            return start + (node.pos not in eval_constants["punctuation_pos"])
        end = start
        for child in node.children:
            end = visit(child, end, False)
        if not is_root and end > start:
            found[(node.category, start, end)] += 1
        return end

    visit(prepared, 0, True)
    return found


def has_acc(tree: Tree) -> bool:
    """True when the tree holds an ACC phrase or an ACC candidate coordination."""
    prefix = acc_constants["phrase_prefix"]
    if any(isinstance(n, Internal) and n.category.startswith(prefix) for _, n in iter_nodes(tree)):
        return True
    return bool(find_candidates(tree))


def labeled_bracket_f1(
    gold_trees: Sequence[Tree], pred_trees: Sequence[Tree], exclude_acc: bool = False
) -> BracketScore:
    """Micro-averaged labeled bracket precision, recall and F1.

    Function tags and indices are ignored, empty elements removed and
    punctuation excluded from spans.

    Args:
        gold_trees: Reference trees.
        pred_trees: Parser output, one per gold tree.
        exclude_acc: Skip sentences whose gold tree contains ACC structures.

    Raises:
        TokenMismatchError: Corpus sizes or sentence yields differ.
        EmptyCorpusError: No sentence is left to score.
    """
    if len(gold_trees) != len(pred_trees):
        raise TokenMismatchError(f"{len(gold_trees)} gold trees but {len(pred_trees)} predicted")
    matched = gold_total = pred_total = scored = 0
    for i, (gold, pred) in enumerate(zip(gold_trees, pred_trees)):
        if yield_tokens(gold) != yield_tokens(pred):
            raise TokenMismatchError(f"sentence {i + 1}: gold and predicted yields differ")
        if exclude_acc and has_acc(gold):
            continue
        gold_brackets, pred_brackets = brackets(gold), brackets(pred)
        matched += sum((gold_brackets & pred_brackets).values())
        gold_total += sum(gold_brackets.values())
        pred_total += sum(pred_brackets.values())
        scored += 1
    if not scored:
        raise EmptyCorpusError("no sentences to score")

    precision = matched / pred_total if pred_total else 0.0
    recall = matched / gold_total if gold_total else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    logger.info("EVALB over %d sentences: P=%.4f R=%.4f F1=%.4f", scored, precision, recall, f1)
    return BracketScore(precision, recall, f1)
