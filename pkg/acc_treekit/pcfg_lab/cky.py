# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Viterbi CKY over a binarized grammar with unary closure."""

import logging
from typing import NamedTuple, Sequence

import numpy as np
from nltk.tree import Tree as NltkTree
from nltk.tree.transforms import un_chomsky_normal_form

from acc_treekit.constants import pcfg_constants
from acc_treekit.pcfg_lab.grammar import Grammar, from_nltk
from acc_treekit.treebank_io import Internal, Tree

logger = logging.getLogger(__name__)

_NONE, _LEXICAL, _UNARY, _BINARY = range(4)


class ParseResult(NamedTuple):
    tree: Tree
    logp: float


class _Chart:
    def __init__(self, grammar: Grammar, n: int):
        self.symbols = sorted(grammar.nonterminals)
        self.index = {symbol: i for i, symbol in enumerate(self.symbols)}
        size = (n, n + 1, len(self.symbols))
        self.score = np.full(size, -np.inf)
        self.kind = np.zeros(size, dtype=np.int8)
        # Rule number for unary/binary entries.
        self.rule = np.full(size, -1, dtype=np.int64)
        self.split = np.full(size, -1, dtype=np.int64)


def _indexed_rules(grammar: Grammar, chart: _Chart):
    unary = [r for r in grammar.rules if len(r.rhs) == 1]
    binary = [r for r in grammar.rules if len(r.rhs) == 2]
    parents = np.array([chart.index[r.lhs] for r in binary], dtype=np.int64)
    lefts = np.array([chart.index[r.rhs[0]] for r in binary], dtype=np.int64)
    rights = np.array([chart.index[r.rhs[1]] for r in binary], dtype=np.int64)
    logps = np.array([r.logp for r in binary], dtype=float)
    unaries = [(chart.index[r.lhs], chart.index[r.rhs[0]], r.logp) for r in unary]
    return unaries, (parents, lefts, rights, logps)


def _close_unaries(chart: _Chart, i: int, j: int, unaries) -> None:
    cell = chart.score[i, j]
    for _ in range(len(chart.symbols)):
        changed = False
        for number, (parent, child, logp) in enumerate(unaries):
            candidate = cell[child] + logp
            if candidate > cell[parent]:
                cell[parent] = candidate
                chart.kind[i, j, parent] = _UNARY
                chart.rule[i, j, parent] = number
                changed = True
        if not changed:
            return


def _fill(grammar: Grammar, tokens: Sequence[str]) -> _Chart:
    n = len(tokens)
    chart = _Chart(grammar, n)
    unaries, (parents, lefts, rights, logps) = _indexed_rules(grammar, chart)

    for i, token in enumerate(tokens):
        for pos, logp in grammar.tags_for(token).items():
            chart.score[i, i + 1, chart.index[pos]] = logp
            chart.kind[i, i + 1, chart.index[pos]] = _LEXICAL
        _close_unaries(chart, i, i + 1, unaries)

    for length in range(2, n + 1):
        for i in range(n - length + 1):
            j = i + length
            if len(parents):
                # totals[k, r]: rule r with its split at i + 1 + k.
                left = chart.score[i, i + 1:j][:, lefts]
                right = chart.score[i + 1:j, j][:, rights]
                totals = left + right + logps
                best_k = np.argmax(totals, axis=0)
                best = totals[best_k, np.arange(len(parents))]
                for number in np.flatnonzero(np.isfinite(best)):
                    parent = parents[number]
                    if best[number] > chart.score[i, j, parent]:
                        chart.score[i, j, parent] = best[number]
                        chart.kind[i, j, parent] = _BINARY
                        chart.rule[i, j, parent] = number
                        chart.split[i, j, parent] = i + 1 + best_k[number]
            _close_unaries(chart, i, j, unaries)
    return chart


def _backtrace(chart: _Chart, grammar: Grammar, tokens: Sequence[str], i: int, j: int, symbol: int):
    unary = [r for r in grammar.rules if len(r.rhs) == 1]
    binary = [r for r in grammar.rules if len(r.rhs) == 2]

    def build(i: int, j: int, symbol: int) -> NltkTree:
        label = chart.symbols[symbol]
        kind = chart.kind[i, j, symbol]
        if kind == _LEXICAL:
            return NltkTree(label, [tokens[i]])
        if kind == _UNARY:
            child = chart.index[unary[chart.rule[i, j, symbol]].rhs[0]]
            return NltkTree(label, [build(i, j, child)])
        if kind == _BINARY:
            rule = binary[chart.rule[i, j, symbol]]
            k = int(chart.split[i, j, symbol])
            return NltkTree(
                label,
                [build(i, k, chart.index[rule.rhs[0]]), build(k, j, chart.index[rule.rhs[1]])],
            )
        raise AssertionError(f"no backpointer for {label} over ({i}, {j})")

    return build(i, j, symbol)


def cky_best(grammar: Grammar, tokens: Sequence[str]) -> ParseResult | None:
    """Most probable tree and its log-probability, or None without a derivation.

    Ties go to the lower split point and then the earlier rule.

    Raises:
        ValueError: ``tokens`` is empty.
    """
    if not tokens:
        raise ValueError("cannot parse an empty token sequence")
    chart = _fill(grammar, tokens)
    start = chart.index[grammar.start]
    logp = float(chart.score[0, len(tokens), start])
    if not np.isfinite(logp):
        logger.debug("no parse for %r", " ".join(tokens))
        return None

    derivation = _backtrace(chart, grammar, tokens, 0, len(tokens), start)
    un_chomsky_normal_form(
        derivation, expandUnary=False, childChar=pcfg_constants["intermediate_mark"]
    )
    tree = from_nltk(derivation)
    if isinstance(tree, Internal) and tree.category == grammar.start and len(tree.children) == 1:
        tree = tree.children[0]
    return ParseResult(tree, logp)


def cky_parse(grammar: Grammar, tokens: Sequence[str]) -> Tree | None:
    """Best tree with binarization undone and the start symbol removed."""
    result = cky_best(grammar, tokens)
    return None if result is None else result.tree
