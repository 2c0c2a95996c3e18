# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

"""Shared fixtures and seeded generators for the acc_treekit test suite."""

import random
from pathlib import Path

import pytest

from acc_treekit.data import sample_path
from acc_treekit.evaluation.coord_eval import ArgSpan, Conjunct, CoordGold, CoordPhrase
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    Tree,
    parse_label,
    read_corpus,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def sample_trees() -> list[Tree]:
    return read_corpus(sample_path())


@pytest.fixture
def expected_acc_trees() -> list[Tree]:
    return read_corpus(FIXTURES / "sample.acc.mrg")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


# ---------------------------------------------------------------------------
# Random trees with injected ACC patterns

_NOUNS = ["shares", "bonds", "apples", "miles", "cars", "loans"]
_PREPS = ["in", "for", "to", "by"]
_PLACES = ["Spain", "May", "Asia", "Paris", "Rome"]
_VERBS = [("VBD", "paid"), ("VBD", "sold"), ("VBZ", "gives"), ("VBP", "move")]


def _np(rng: random.Random, label: str = "NP") -> Internal:
    return Internal(
        parse_label(label),
        (Leaf("CD", str(rng.randint(1, 99))), Leaf("NNS", rng.choice(_NOUNS))),
    )


def _arg(rng: random.Random, category: str, suffix: str) -> Internal:
    tag = rng.choice(["", "", "-TMP", "-LOC"]) if category in ("PP", "ADVP") else ""
    label = parse_label(f"{category}{tag}{suffix}")
    if category == "NP":
        return Internal(label, _np(rng).children)
    if category == "PP":
        place = Internal(parse_label("NP"), (Leaf("NNP", rng.choice(_PLACES)),))
        return Internal(label, (Leaf("IN", rng.choice(_PREPS)), place))
    if category == "ADJP":
        return Internal(label, (Leaf("JJ", rng.choice(["cheap", "single-A", "late"])),))
    return Internal(label, (Leaf("RB", rng.choice(["abroad", "here", "later"])),))


def _gap_clause(arg: Internal) -> Internal:
    """S layer with an empty subject above an indexed argument."""
    subject = Internal(parse_label("NP-SBJ"), (Leaf("-NONE-", "*"),))
    return Internal(parse_label("S"), (subject, arg))


def _acc_coordination(rng: random.Random, base: int) -> Internal:
    """VP coordination injecting one accepted or rejected shape."""
    arity = rng.randint(2, 3)
    injection = rng.choices(
        [
            "none",
            "after",
            "verb_between",
            "mismatch",
            "but",
            "permute",
            "substitute",
            "nested",
            "gap",
            "adverbs",
        ],
        weights=[8, 1, 1, 1, 1, 2, 2, 1, 1, 1],
    )[0]
    if injection == "adverbs":
        categories = ["ADVP"] * arity
    else:
        categories = [rng.choice(["NP", "PP", "ADJP", "ADVP"]) for _ in range(arity)]
    indices = list(range(base, base + arity))

    pos, verb = rng.choice(_VERBS)
    first: list[Tree] = [Leaf(pos, verb)]
    if rng.random() < 0.3:
        first.append(_np(rng))
    args = [_arg(rng, c, f"-{i}") for c, i in zip(categories, indices)]
    if injection == "nested":
        of = Internal(parse_label("PP"), (Leaf("IN", "of"), args[0]))
        args[0] = Internal(parse_label("NP"), (_np(rng), of))
    if injection == "gap":
        args[0] = _gap_clause(args[0])
    if injection == "verb_between":
        first = first[1:] + [args[0], Leaf(pos, verb)] + args[1:]
    else:
        first.extend(args)
    if injection == "after":
        first.append(Internal(parse_label("ADVP-TMP"), (Leaf("RB", "yesterday"),)))

    n_conjuncts = rng.randint(2, 3)
    children: list[Tree] = [Internal(parse_label("VP"), tuple(first))]
    for k in range(1, n_conjuncts):
        pairs = list(zip(categories, indices))
        if injection == "permute" and len(set(categories)) == arity:
            rng.shuffle(pairs)
        if injection == "substitute":
            pairs = [("ADVP" if c == "PP" else c, i) for c, i in pairs]
        if injection == "mismatch":
            pairs = pairs[:-1]
        later = tuple(_arg(rng, c, f"={i}") for c, i in pairs)
        if injection == "gap":
            later = (_gap_clause(later[0]),) + later[1:]
        if k == n_conjuncts - 1:
            if n_conjuncts > 2:
                children.append(Leaf(",", ","))
            word = "but" if injection == "but" else rng.choice(["and", "or"])
            children.append(Leaf("CC", word))
        else:
            children.append(Leaf(",", ","))
        children.append(Internal(parse_label("VP"), later))
    return Internal(parse_label("VP"), tuple(children))


def random_acc_tree(rng: random.Random) -> Tree:
    """A sentence around one coordination, usually an ACC candidate."""
    subject_index = rng.random() < 0.3
    base = rng.randint(1, 4) + (5 if subject_index else 0)
    subject_label = f"NP-SBJ-{rng.randint(1, 4)}" if subject_index else "NP-SBJ"
    subject = Internal(parse_label(subject_label), (Leaf("PRP", "They"),))
    if rng.random() < 0.15:
        plain = [
            Internal(parse_label("VP"), (Leaf("VBD", "ran"), _np(rng))),
            Leaf("CC", "and"),
            Internal(parse_label("VP"), (Leaf("VBD", "walked"), _np(rng))),
        ]
        predicate: Tree = Internal(parse_label("VP"), tuple(plain))
    else:
        predicate = _acc_coordination(rng, base)
    if rng.random() < 0.3:
        predicate = Internal(parse_label("VP"), (Leaf("MD", "will"), predicate))
    children: list[Tree] = [subject, predicate]
    if rng.random() < 0.8:
        children.append(Leaf(".", "."))
    return Internal(parse_label("S"), tuple(children))


@pytest.fixture(scope="session")
def random_trees() -> list[Tree]:
    rng = random.Random(20250101)
    return [random_acc_tree(rng) for _ in range(500)]


# ---------------------------------------------------------------------------
# Random gold / predicted coordination annotations


def _random_phrase(rng: random.Random, start: int, end: int) -> CoordPhrase:
    """A phrase with 2-3 conjuncts inside [start, end)."""
    n = rng.randint(2, 3) if end - start >= 6 else 2
    cuts = sorted(rng.sample(range(start + 1, end), 2 * n - 1))
    bounds = [start] + cuts + [end]
    conjuncts = []
    is_acc = rng.random() < 0.5
    for k in range(n):
        s, e = bounds[2 * k], bounds[2 * k + 1]
        args: tuple[ArgSpan, ...] = ()
        if is_acc and e - s >= 2:
            split = rng.randint(s + 1, e - 1)
            args = (ArgSpan(s, split), ArgSpan(split, e))
        conjuncts.append(Conjunct(ArgSpan(s, e), args))
    return CoordPhrase(tuple(conjuncts), is_acc=is_acc and any(c.args for c in conjuncts))


def _perturb(rng: random.Random, phrase: CoordPhrase, length: int) -> CoordPhrase | None:
    choice = rng.choice(["copy", "copy", "args", "boundary", "drop", "flip"])
    if choice == "drop":
        return None
    if choice == "flip":
        return CoordPhrase(phrase.conjuncts, is_acc=not phrase.is_acc)
    if choice == "args":
        conjuncts = [
            Conjunct(c.span, (ArgSpan(c.span.start, c.span.end),) if c.args else ())
            for c in phrase.conjuncts
        ]
        return CoordPhrase(tuple(conjuncts), is_acc=phrase.is_acc)
    if choice == "boundary":
        last = phrase.conjuncts[-1]
        if last.span.end < length:
            moved = Conjunct(ArgSpan(last.span.start, last.span.end + 1))
            return CoordPhrase(phrase.conjuncts[:-1] + (moved,), is_acc=False)
    return phrase


def random_gold_pred(rng: random.Random) -> tuple[CoordGold, CoordGold]:
    length = rng.randint(12, 24)
    tokens = tuple(f"w{i}" for i in range(length))
    gold_phrases = []
    position = 0
    while position < length - 6 and len(gold_phrases) < 3:
        start = rng.randint(position, position + 2)
        end = min(length - 1, start + rng.randint(5, 8))
        if end - start < 5:
            break
        gold_phrases.append(_random_phrase(rng, start, end))
        position = end + 1

    pred_phrases = []
    seen: set = set()
    for phrase in gold_phrases:
        predicted = _perturb(rng, phrase, length)
        if predicted is not None and predicted.spans not in seen:
            seen.add(predicted.spans)
            pred_phrases.append(predicted)
    if rng.random() < 0.4:
        extra = _random_phrase(rng, 0, min(length, 7))
        if extra.spans not in seen:
            pred_phrases.append(extra)
    rng.shuffle(pred_phrases)
    return CoordGold(tokens, tuple(gold_phrases)), CoordGold(tokens, tuple(pred_phrases))


@pytest.fixture(scope="session")
def random_eval_pairs() -> list[tuple[CoordGold, CoordGold]]:
    rng = random.Random(7)
    return [random_gold_pred(rng) for _ in range(50)]
