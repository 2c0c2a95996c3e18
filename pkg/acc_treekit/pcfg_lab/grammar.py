# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Maximum-likelihood PCFG extraction and rule inventory inspection."""

import collections
import logging
import math
from pathlib import Path
from typing import Sequence

import numpy as np
from nltk.tree import Tree as NltkTree
from nltk.tree.transforms import chomsky_normal_form
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from acc_treekit.constants import pcfg_constants
from acc_treekit.errors import EmptyCorpusError, GrammarFormatError
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    NodeLabel,
    Tree,
    parse_label,
    remove_empty_elements,
    strip_annotations,
)
from acc_treekit.utils.reports import write_text_atomic

logger = logging.getLogger(__name__)

START = pcfg_constants["start_symbol"]
UNK = pcfg_constants["unk_token"]
TOLERANCE = pcfg_constants["normalisation_tolerance"]


class Rule(BaseModel):
    model_config = ConfigDict(frozen=True)

    lhs: str
    rhs: tuple[str, ...]
    logp: float = Field(le=0.0)

    @field_validator("rhs")
    @classmethod
    def _unary_or_binary(cls, rhs: tuple[str, ...]) -> tuple[str, ...]:
        if len(rhs) not in (1, 2):
            raise ValueError(f"rule right-hand side must have 1 or 2 symbols, got {rhs}")
        return rhs

    @property
    def prob(self) -> float:
        return math.exp(self.logp)

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs)}"


class LexEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    pos: str
    token: str
    logp: float = Field(le=0.0)


class Grammar(BaseModel):
    """A binarized PCFG with a per-POS smoothed lexicon.

    ``unk`` maps every POS tag to the log-probability of an unseen token.
    """

    start: str = START
    rules: list[Rule]
    lexicon: list[LexEntry]
    unk: dict[str, float]

    @model_validator(mode="after")
    def _normalised(self) -> "Grammar":
        totals: dict[str, list[float]] = collections.defaultdict(list)
        for rule in self.rules:
            totals[rule.lhs].append(rule.logp)
        for entry in self.lexicon:
            totals[entry.pos].append(entry.logp)
        for pos, logp in self.unk.items():
            totals[pos].append(logp)
        for symbol, logps in totals.items():
            mass = float(np.exp(np.asarray(logps)).sum())
            if abs(mass - 1.0) > TOLERANCE:
                raise ValueError(f"probabilities of {symbol} sum to {mass}, not 1")
        return self

    @property
    def nonterminals(self) -> set[str]:
        symbols = {self.start} | set(self.unk)
        for rule in self.rules:
            symbols.add(rule.lhs)
            symbols.update(rule.rhs)
        return symbols

    def tags_for(self, token: str) -> dict[str, float]:
        """POS log-probabilities for a token; unseen tokens get every tag's UNK mass."""
        seen = {e.pos: e.logp for e in self.lexicon if e.token == token}
        return seen or dict(self.unk)

    def save(self, path: str | Path) -> Path:
        return write_text_atomic(path, self.model_dump_json(indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Grammar":
        """Reads a grammar written by save().

        Raises:
            GrammarFormatError: The file is not a valid grammar.
        """
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except ValidationError as e:
            raise GrammarFormatError(f"{path}: {e}") from e


def is_intermediate(symbol: str) -> bool:
    """Symbols introduced by binarization, e.g. ``VP@<NP-PP>``."""
    return pcfg_constants["intermediate_mark"] in symbol


def to_nltk(tree: Tree) -> NltkTree:
    if isinstance(tree, Leaf):
        return NltkTree(tree.pos, [tree.token])
    return NltkTree(str(tree.label), [to_nltk(child) for child in tree.children])


def from_nltk(tree: NltkTree) -> Tree:
    if len(tree) == 1 and isinstance(tree[0], str):
        return Leaf(tree.label(), tree[0])
    return Internal(parse_label(tree.label()), tuple(from_nltk(child) for child in tree))


def prepare_training_tree(tree: Tree) -> Tree | None:
    """Category-only tree without empty elements, rooted in the start symbol."""
    prepared = remove_empty_elements(strip_annotations(tree))
    if prepared is None:
        return None
    if isinstance(prepared, Internal) and prepared.category == START:
        return prepared
    return Internal(NodeLabel(START), (prepared,))


def binarize(tree: Tree) -> NltkTree:
    converted = to_nltk(tree)
    chomsky_normal_form(converted, factor="right", childChar=pcfg_constants["intermediate_mark"])
    return converted


def extract_grammar(trees: Sequence[Tree]) -> Grammar:
    """Relative-frequency PCFG over right-binarized, annotation-free trees.

    Lexical probabilities use add-one smoothing per POS tag with one extra
    unknown-token outcome: P(w|T) = (c(T,w)+1) / (c(T)+V_T+1).

    Raises:
        EmptyCorpusError: ``trees`` is empty or holds only empty elements.
    """
    rule_counts: collections.Counter[tuple[str, tuple[str, ...]]] = collections.Counter()
    lex_counts: collections.Counter[tuple[str, str]] = collections.Counter()
    used = 0
    for tree in trees:
        prepared = prepare_training_tree(tree)
        if prepared is None:
            continue
        used += 1
        for production in binarize(prepared).productions():
            lhs = str(production.lhs())
            if production.is_lexical():
                lex_counts[(lhs, production.rhs()[0])] += 1
            else:
                rule_counts[(lhs, tuple(str(s) for s in production.rhs()))] += 1
    if not used:
        raise EmptyCorpusError("cannot extract a grammar from an empty corpus")

    lhs_totals: collections.Counter[str] = collections.Counter()
    for (lhs, _), count in rule_counts.items():
        lhs_totals[lhs] += count
    rules = [
        Rule(lhs=lhs, rhs=rhs, logp=math.log(count / lhs_totals[lhs]))
        for (lhs, rhs), count in sorted(rule_counts.items())
    ]

    pos_totals: collections.Counter[str] = collections.Counter()
    pos_types: collections.Counter[str] = collections.Counter()
    for (pos, _), count in lex_counts.items():
        pos_totals[pos] += count
        pos_types[pos] += 1
    denominators = {pos: pos_totals[pos] + pos_types[pos] + 1 for pos in pos_totals}
    lexicon = [
        LexEntry(pos=pos, token=token, logp=math.log((count + 1) / denominators[pos]))
        for (pos, token), count in sorted(lex_counts.items())
    ]
    unk = {pos: math.log(1 / denominators[pos]) for pos in sorted(denominators)}

    logger.info(
        "extracted %d rules and %d lexical entries from %d trees", len(rules), len(lexicon), used
    )
    return Grammar(start=START, rules=rules, lexicon=lexicon, unk=unk)


def rules_for(grammar: Grammar, lhs: str) -> list[Rule]:
    """Rules rewriting ``lhs``, most probable first."""
    return sorted((r for r in grammar.rules if r.lhs == lhs), key=lambda r: (-r.logp, r.rhs))


def lexicon_for(grammar: Grammar, pos: str) -> list[tuple[str, float]]:
    """(token, logp) pairs of a POS tag, the unknown-token entry included."""
    entries = [(e.token, e.logp) for e in grammar.lexicon if e.pos == pos]
    if pos in grammar.unk:
        entries.append((UNK, grammar.unk[pos]))
    return sorted(entries, key=lambda entry: (-entry[1], entry[0]))


class RuleShift(BaseModel):
    rule: str
    first: float
    second: float
    delta: float


class RuleDiff(BaseModel):
    only_in_first: list[str] = []
    only_in_second: list[str] = []
    shifted: list[RuleShift] = []

    @property
    def empty(self) -> bool:
        return not (self.only_in_first or self.only_in_second or self.shifted)


def rule_diff(first: Grammar, second: Grammar) -> RuleDiff:
    """Rules unique to each grammar and probability changes of shared rules."""
    a = {(r.lhs, r.rhs): r for r in first.rules}
    b = {(r.lhs, r.rhs): r for r in second.rules}
    shifted = []
    for key in sorted(a.keys() & b.keys()):
        delta = b[key].prob - a[key].prob
        if abs(delta) > TOLERANCE:
            shifted.append(
                RuleShift(rule=str(a[key]), first=a[key].prob, second=b[key].prob, delta=delta)
            )
    return RuleDiff(
        only_in_first=[str(a[k]) for k in sorted(a.keys() - b.keys())],
        only_in_second=[str(b[k]) for k in sorted(b.keys() - a.keys())],
        shifted=shifted,
    )
