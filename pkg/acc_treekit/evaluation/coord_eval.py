# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Coordination span evaluation against bracket-annotated gold sentences.

Gold format, one sentence per line::

    Mary paid ( [ $ 11.08 ] [ for berries ] ) , and ( [ $ 9.31 ] [ for peaches ] )

Round brackets mark conjuncts, square brackets mark the arguments of a
cluster. Consecutive conjuncts separated only by commas and conjunctions form
one coordination phrase; a phrase is an ACC phrase when any of its conjuncts
carries argument spans.
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import regex
from pydantic import BaseModel, Field, computed_field, model_validator

from acc_treekit.constants import acc_constants, eval_constants, treebank_constants
from acc_treekit.errors import GoldFormatError, TokenMismatchError
from acc_treekit.treebank_io import Internal, Leaf, Tree, is_empty, leaves

logger = logging.getLogger(__name__)

_GOLD_TOKEN_RE = regex.compile(r"[()\[\]]|[^\s()\[\]]+")

PUNCTUATION = eval_constants["punctuation_pos"]
SEPARATORS = eval_constants["gold_separators"]
CONJUNCTIONS = acc_constants["conjunction_tokens"]
PRECONJUNCTIONS = eval_constants["preconjunction_tokens"]
PHRASE_PREFIX = acc_constants["phrase_prefix"]


@dataclass(frozen=True, order=True)
class ArgSpan:
    """Half-open token interval."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span ({self.start}, {self.end})")

    def __contains__(self, other: "ArgSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


def _check_ordered(spans: Sequence[ArgSpan], what: str) -> None:
    for left, right in zip(spans, spans[1:]):
        if left.end > right.start:
            raise ValueError(f"{what} {left} and {right} overlap or are out of order")


@dataclass(frozen=True)
class Conjunct:
    span: ArgSpan
    args: tuple[ArgSpan, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if any(arg not in self.span for arg in self.args):
            raise ValueError(f"argument outside conjunct {self.span}")
        _check_ordered(self.args, "arguments")


@dataclass(frozen=True)
class CoordPhrase:
    conjuncts: tuple[Conjunct, ...]
    is_acc: bool = False

    def __post_init__(self):
        object.__setattr__(self, "conjuncts", tuple(self.conjuncts))
        if len(self.conjuncts) < 2:
            raise ValueError("a coordination phrase needs at least two conjuncts")
        _check_ordered([c.span for c in self.conjuncts], "conjuncts")

    @property
    def spans(self) -> tuple[ArgSpan, ...]:
        return tuple(c.span for c in self.conjuncts)

    @property
    def args(self) -> tuple[tuple[ArgSpan, ...], ...]:
        return tuple(c.args for c in self.conjuncts)


@dataclass(frozen=True)
class CoordGold:
    tokens: tuple[str, ...]
    phrases: tuple[CoordPhrase, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "phrases", tuple(self.phrases))
        for phrase in self.phrases:
            if phrase.spans[-1].end > len(self.tokens):
                raise ValueError(f"phrase {phrase.spans} exceeds {len(self.tokens)} tokens")


class EvalReport(BaseModel):
    name: str
    numerator: int = Field(ge=0)
    denominator: int = Field(ge=0)

    @computed_field
    @property
    def value(self) -> float:
        return self.numerator / self.denominator if self.denominator else 0.0

    @model_validator(mode="after")
    def _bounded(self) -> "EvalReport":
        if self.numerator > self.denominator:
            raise ValueError(f"{self.name}: numerator exceeds denominator")
        return self


# ---------------------------------------------------------------------------
# Gold parsing


def _parse_line(line: str, lineno: int) -> CoordGold:
    tokens: list[str] = []
    conjuncts: list[Conjunct] = []
    conjunct_start: int | None = None
    arg_start: int | None = None
    args: list[ArgSpan] = []

    def fail(message: str) -> GoldFormatError:
        return GoldFormatError(message, lineno)

    for symbol in _GOLD_TOKEN_RE.findall(line):
        if symbol == eval_constants["conjunct_open"]:
            if conjunct_start is not None:
                raise fail("nested round brackets")
            conjunct_start, args = len(tokens), []
        elif symbol == eval_constants["conjunct_close"]:
            if conjunct_start is None:
                raise fail("')' without matching '('")
            if arg_start is not None:
                raise fail("')' inside an argument span")
            if conjunct_start == len(tokens):
                raise fail("empty conjunct")
            conjuncts.append(Conjunct(ArgSpan(conjunct_start, len(tokens)), tuple(args)))
            conjunct_start = None
        elif symbol == eval_constants["arg_open"]:
            if conjunct_start is None:
                raise fail("'[' outside a conjunct")
            if arg_start is not None:
                raise fail("nested square brackets")
            arg_start = len(tokens)
        elif symbol == eval_constants["arg_close"]:
            if arg_start is None:
                raise fail("']' without matching '['")
            if arg_start == len(tokens):
                raise fail("empty argument span")
            args.append(ArgSpan(arg_start, len(tokens)))
            arg_start = None
        else:
            tokens.append(symbol)
    if conjunct_start is not None or arg_start is not None:
        raise fail("unclosed bracket at end of line")
    return CoordGold(tuple(tokens), _group(tokens, conjuncts, lineno))


def _group(tokens: list[str], conjuncts: list[Conjunct], lineno: int) -> tuple[CoordPhrase, ...]:
    groups: list[list[Conjunct]] = []
    for conjunct in conjuncts:
        if groups:
            gap = tokens[groups[-1][-1].span.end:conjunct.span.start]
            if all(token.lower() in SEPARATORS for token in gap):
                groups[-1].append(conjunct)
                continue
        groups.append([conjunct])
    phrases = []
    for group in groups:
        if len(group) < 2:
            raise GoldFormatError(f"conjunct {group[0].span} has no sibling conjunct", lineno)
        phrases.append(CoordPhrase(tuple(group), is_acc=any(c.args for c in group)))
    return tuple(phrases)


def parse_gold(text: str) -> list[CoordGold]:
    """Parses annotated sentences, one per non-blank line.

    Raises:
        GoldFormatError: Unbalanced or nested markup, or a conjunct without a
            sibling; carries the 1-based line number.
    """
    golds = [
        _parse_line(line, lineno)
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]
    logger.debug("parsed %d gold sentences", len(golds))
    return golds


def gold_summary(golds: Sequence[CoordGold]) -> dict[str, int]:
    """Sentence and phrase counts of a gold file."""
    return {
        "sentences": len(golds),
        "coordination_sentences": sum(bool(g.phrases) for g in golds),
        "acc_sentences": sum(any(p.is_acc for p in g.phrases) for g in golds),
        "phrases": sum(len(g.phrases) for g in golds),
        "acc_phrases": sum(p.is_acc for g in golds for p in g.phrases),
        "arguments": sum(len(a) for g in golds for p in g.phrases if p.is_acc for a in p.args),
    }


# ---------------------------------------------------------------------------
# Extraction from trees


class _Extractor:
    def __init__(self, tree: Tree, conjunct_args: bool):
        self.conjunct_args = conjunct_args
        overt = [leaf for leaf in leaves(tree) if not leaf.is_empty]
        self.tokens = tuple(leaf.token for leaf in overt)
        self.punct = [leaf.pos in PUNCTUATION for leaf in overt]
        self.phrases: list[tuple[int, CoordPhrase]] = []
        self._visit(tree, 0)

    def _trim(self, start: int, end: int) -> ArgSpan | None:
        while start < end and self.punct[start]:
            start += 1
        while end > start and self.punct[end - 1]:
            end -= 1
        return ArgSpan(start, end) if start < end else None

    def _child_spans(self, node: Internal, start: int) -> list[tuple[Tree, int, int]]:
        spans = []
        for child in node.children:
            width = sum(not leaf.is_empty for leaf in leaves(child))
            spans.append((child, start, start + width))
            start += width
        return spans

    def _args(self, node: Internal, start: int) -> tuple[ArgSpan, ...]:
        args = []
        for child, s, e in self._child_spans(node, start):
            if isinstance(child, Internal) and (span := self._trim(s, e)) is not None:
                args.append(span)
        return tuple(args)

    def _coordination(self, node: Internal, start: int) -> CoordPhrase | None:
        children = self._child_spans(node, start)
        if node.category.startswith(PHRASE_PREFIX):
            conjuncts = [
                Conjunct(span, self._args(child, s))
                for child, s, e in children
                if isinstance(child, Internal) and (span := self._trim(s, e)) is not None
            ]
            return CoordPhrase(tuple(conjuncts), is_acc=True) if len(conjuncts) >= 2 else None

        phrasal = [c for c, _, _ in children if isinstance(c, Internal) and not is_empty(c)]
        joined = any(
            isinstance(c, Leaf)
            and c.pos == treebank_constants["cc_pos"]
            and c.token.lower() in CONJUNCTIONS
            for c, _, _ in children
        )
        if len(phrasal) < 2 or not joined:
            return None
        conjuncts = []
        for child, s, e in children:
            if isinstance(child, Leaf) and child.pos in (treebank_constants["cc_pos"], *PUNCTUATION):
                continue
            if isinstance(child, Leaf) and not conjuncts and child.token.lower() in PRECONJUNCTIONS:
                continue
            span = self._trim(s, e)
            if span is None:
                continue
            args = self._args(child, s) if self.conjunct_args and isinstance(child, Internal) else ()
            conjuncts.append(Conjunct(span, args))
        return CoordPhrase(tuple(conjuncts)) if len(conjuncts) >= 2 else None

    def _visit(self, node: Tree, start: int) -> None:
        if isinstance(node, Leaf):
            return
        phrase = self._coordination(node, start)
        if phrase is not None:
            self.phrases.append((start, phrase))
        for child, s, _ in self._child_spans(node, start):
            self._visit(child, s)


def extract_predicted(
    tree: Tree, tokens: Sequence[str] | None = None, conjunct_args: bool = False
) -> CoordGold:
    """Reads coordination phrases off a parse tree.

    A node with two or more phrasal children and an ``and``/``or`` CC leaf
    yields a plain phrase over its non-CC, non-punctuation children (a
    leading "both", "either" or "neither" is skipped); an
    ACCPH node yields an ACC phrase whose conjuncts are its ACC clusters and
    whose arguments are the clusters' children. Leading and trailing
    punctuation is trimmed from every span.

    Args:
        tree: A parse of the sentence.
        tokens: Expected token sequence, checked against the tree's yield.
        conjunct_args: Also read each plain conjunct's phrasal children as
            argument spans (for PTB-style output scored against gold that
            keeps the verb inside the first conjunct).

    Raises:
        TokenMismatchError: ``tokens`` differs from the tree's yield.
    """
    extractor = _Extractor(tree, conjunct_args)
    if tokens is not None and tuple(tokens) != extractor.tokens:
        raise TokenMismatchError(
            f"tree yield {' '.join(extractor.tokens)!r} != {' '.join(tokens)!r}"
        )
    return CoordGold(extractor.tokens, tuple(phrase for _, phrase in extractor.phrases))


# ---------------------------------------------------------------------------
# Metrics


def _check_pair(gold: Sequence[CoordGold], pred: Sequence[CoordGold]) -> None:
    if len(gold) != len(pred):
        raise TokenMismatchError(f"{len(gold)} gold sentences but {len(pred)} predicted")
    for i, (g, p) in enumerate(zip(gold, pred)):
        if g.tokens != p.tokens:
            raise TokenMismatchError(f"sentence {i + 1}: gold and predicted tokens differ")


def _match(
    gold: Sequence[CoordPhrase], pred: Sequence[CoordPhrase], with_args: bool = False
) -> list[tuple[CoordPhrase, CoordPhrase | None]]:
    """Greedy one-to-one exact matching on conjunct spans.

    Among unused predictions with identical spans, one that also has
    identical argument spans is preferred.
    """
    used: set[int] = set()
    pairs = []
    for g in gold:
        same_spans = [i for i, p in enumerate(pred) if i not in used and p.spans == g.spans]
        same_args = [i for i in same_spans if pred[i].args == g.args]
        chosen = same_args[0] if same_args else (None if with_args or not same_spans else same_spans[0])
        if chosen is not None:
            used.add(chosen)
        pairs.append((g, None if chosen is None else pred[chosen]))
    return pairs


def conjunct_recall(
    gold: Sequence[CoordGold], pred: Sequence[CoordGold], acc_only: bool = False
) -> EvalReport:
    """Gold phrases whose conjunct spans are all predicted exactly."""
    _check_pair(gold, pred)
    numerator = denominator = 0
    for g, p in zip(gold, pred):
        phrases = [ph for ph in g.phrases if ph.is_acc or not acc_only]
        pairs = _match(phrases, p.phrases)
        denominator += len(pairs)
        numerator += sum(match is not None for _, match in pairs)
    return EvalReport(
        name="conjuncts-acc" if acc_only else "conjuncts",
        numerator=numerator,
        denominator=denominator,
    )


def argument_recall(gold: Sequence[CoordGold], pred: Sequence[CoordGold]) -> EvalReport:
    """Gold cluster arguments found among the predicted argument spans."""
    _check_pair(gold, pred)
    numerator = denominator = 0
    for g, p in zip(gold, pred):
        predicted = {arg for phrase in p.phrases for args in phrase.args for arg in args}
        for phrase in g.phrases:
            if not phrase.is_acc:
                continue
            for args in phrase.args:
                denominator += len(args)
                numerator += sum(arg in predicted for arg in args)
    return EvalReport(name="args", numerator=numerator, denominator=denominator)


def internal_given_boundaries(
    gold: Sequence[CoordGold], pred: Sequence[CoordGold]
) -> EvalReport:
    """Among ACC phrases with correct boundaries, those with correct arguments."""
    _check_pair(gold, pred)
    numerator = denominator = 0
    for g, p in zip(gold, pred):
        for phrase, match in _match([ph for ph in g.phrases if ph.is_acc], p.phrases):
            if match is None:
                continue
            denominator += 1
            numerator += match.args == phrase.args
    return EvalReport(name="internal", numerator=numerator, denominator=denominator)


def accph_identification(
    gold: Sequence[CoordGold], pred: Sequence[CoordGold], strict: bool = False
) -> tuple[EvalReport, EvalReport]:
    """Recall and precision of ACC-labelled phrases.

    Strict scoring also requires every argument span to be correct.
    """
    _check_pair(gold, pred)
    matched = gold_total = pred_total = 0
    for g, p in zip(gold, pred):
        gold_acc = [ph for ph in g.phrases if ph.is_acc]
        pred_acc = [ph for ph in p.phrases if ph.is_acc]
        gold_total += len(gold_acc)
        pred_total += len(pred_acc)
        matched += sum(m is not None for _, m in _match(gold_acc, pred_acc, with_args=strict))
    name = "accph-strict" if strict else "accph"
    return (
        EvalReport(name=f"{name}-recall", numerator=matched, denominator=gold_total),
        EvalReport(name=f"{name}-precision", numerator=matched, denominator=pred_total),
    )


def evaluate(
    gold: Sequence[CoordGold], pred: Sequence[CoordGold], metrics: Sequence[str]
) -> dict[str, EvalReport]:
    """Runs the named span metrics; ``evalb`` is scored on trees elsewhere."""
    reports: list[EvalReport] = []
    for metric in metrics:
        if metric == "conjuncts":
            reports.append(conjunct_recall(gold, pred))
        elif metric == "conjuncts-acc":
            reports.append(conjunct_recall(gold, pred, acc_only=True))
        elif metric == "args":
            reports.append(argument_recall(gold, pred))
        elif metric == "internal":
            reports.append(internal_given_boundaries(gold, pred))
        elif metric in ("accph", "accph-strict"):
            reports.extend(accph_identification(gold, pred, strict=metric == "accph-strict"))
        elif metric != "evalb":
            raise ValueError(f"unknown metric {metric!r}")
    return {report.name: report for report in reports}
