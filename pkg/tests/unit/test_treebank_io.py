# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

import logging

import pytest

from acc_treekit.errors import InvalidPathError, LabelError, TreebankParseError
from acc_treekit.treebank_io import (
    Internal,
    Leaf,
    NodeLabel,
    canonicalize_indices,
    format_corpus,
    format_label,
    is_empty,
    iter_nodes,
    parse_label,
    parse_trees,
    read_corpus,
    remove_empty_elements,
    replace_subtree,
    serialize,
    span_at,
    strip_annotations,
    strip_indices,
    subtree,
    write_corpus,
    yield_tokens,
)


def _tree(text):
    (parsed,) = parse_trees(text)
    return parsed


@pytest.mark.parametrize(
    "text, expected",
    [
        ("NP", NodeLabel("NP")),
        ("NP-SBJ-1", NodeLabel("NP", ("SBJ",), ref_index=1)),
        ("PP-TMP=2", NodeLabel("PP", ("TMP",), gap_index=2)),
        ("NP-EXT=1", NodeLabel("NP", ("EXT",), gap_index=1)),
        ("-NONE-", NodeLabel("-NONE-")),
        ("-LRB-", NodeLabel("-LRB-")),
        ("ACC_NP-PP", NodeLabel("ACC_NP-PP")),
        ("ACCPH_NP-ADVP", NodeLabel("ACCPH_NP-ADVP")),
        ("PRP$", NodeLabel("PRP$")),
    ],
)
def test_parse_label(text, expected):
    assert parse_label(text) == expected
    assert format_label(expected) == text


def test_parse_label_keeps_last_numeric_suffix(caplog):
    with caplog.at_level(logging.WARNING, logger="acc_treekit.diagnostics"):
        label = parse_label("NP-1-2")
    assert label.ref_index == 2
    assert label.function_tags == ("1",)
    assert any("several -N suffixes" in r.getMessage() for r in caplog.records)


@pytest.mark.parametrize("text", ["", "NP-", "NP=X", "NP=1=2", "N P"])
def test_parse_label_rejects_malformed(text):
    with pytest.raises(LabelError):
        parse_label(text)


def test_label_index_prefers_gap():
    assert NodeLabel("NP", gap_index=3).index == 3
    assert NodeLabel("NP", ref_index=4).index == 4
    assert NodeLabel("NP", ("SBJ",)).index is None


def test_parse_trees_unwraps_outer_bracket():
    trees = parse_trees("( (S (NP (DT the) (NN cat)) (VP (VBD sat))) )\n(S (VP (VB go)))")
    assert len(trees) == 2
    assert trees[0].category == "S"
    assert yield_tokens(trees[0]) == ["the", "cat", "sat"]


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("(S (NP (DT the))", 1, "unbalanced '('"),
        ("(S (NP (DT the)))\n)", 2, "unbalanced ')'"),
        ("(S\n  (NP))", 2, "has no token"),
        ("(S ())", 1, "empty expression"),
        ("(S (NP- (DT a)))", 1, "dangling separator"),
    ],
)
def test_parse_trees_errors_carry_position(text, line, message):
    with pytest.raises(TreebankParseError) as excinfo:
        parse_trees(text)
    assert excinfo.value.line == line
    assert message in str(excinfo.value)


def test_serialize_round_trip():
    text = "(S (NP-SBJ-1 (DT The) (NNS bonds)) (VP (VBD were) (ADJP-PRD=2 (JJ cheap))) (. .))"
    assert serialize(_tree(text)) == text


def test_serialize_pretty():
    tree = _tree("(S (NP (DT the) (NN cat)) (VP (VBD sat)))")
    assert serialize(tree, pretty=True) == "(S\n  (NP (DT the) (NN cat))\n  (VP (VBD sat)))"
    assert parse_trees(serialize(tree, pretty=True)) == [tree]


def test_format_corpus_one_tree_per_line():
    trees = parse_trees("(S (VP (VB go))) (S (VP (VB stop)))")
    assert format_corpus(trees) == "(S (VP (VB go)))\n(S (VP (VB stop)))\n"


def test_read_corpus_directory_with_sections(tmp_path):
    for section, word in (("02", "go"), ("21", "run"), ("23", "stop")):
        directory = tmp_path / section
        directory.mkdir()
        (directory / f"wsj_{section}01.mrg").write_text(f"( (S (VP (VB {word}))) )\n")
    assert len(read_corpus(tmp_path)) == 3
    trees = read_corpus(tmp_path, sections="02-21")
    assert [yield_tokens(t) for t in trees] == [["go"], ["run"]]


def test_write_corpus_is_atomic(tmp_path):
    trees = parse_trees("(S (VP (VB go)))")
    target = write_corpus(tmp_path / "out" / "corpus.mrg", trees)
    assert target.read_text() == "(S (VP (VB go)))\n"
    assert [p.name for p in target.parent.iterdir()] == ["corpus.mrg"]


def test_navigation():
    tree = _tree("(S (NP (-NONE- *)) (VP (VBD sold) (NP (NNS shares)) (PP (TO to) (NP (NNS funds)))))")
    assert subtree(tree, (1, 2)).category == "PP"
    assert span_at(tree, (1, 2)) == (2, 4)
    assert span_at(tree, (0,)) == (0, 0)
    assert is_empty(subtree(tree, (0,)))
    with pytest.raises(InvalidPathError):
        subtree(tree, (1, 5))
    with pytest.raises(InvalidPathError):
        subtree(tree, (1, 0, 0))

    replaced = replace_subtree(tree, (1, 1), Internal(NodeLabel("NP"), (Leaf("NNS", "bonds"),)))
    assert yield_tokens(replaced) == ["sold", "bonds", "to", "funds"]
    assert yield_tokens(tree) == ["sold", "shares", "to", "funds"]
    assert [p for p, _ in iter_nodes(tree)][:3] == [(), (0,), (0, 0)]


def test_strip_and_remove_empties():
    tree = _tree("(S (NP-SBJ-1 (-NONE- *)) (VP (VBD rose) (NP-EXT=1 (CD 5))))")
    assert serialize(strip_indices(tree)) == "(S (NP-SBJ (-NONE- *)) (VP (VBD rose) (NP-EXT (CD 5))))"
    assert serialize(strip_annotations(tree)) == "(S (NP (-NONE- *)) (VP (VBD rose) (NP (CD 5))))"
    assert serialize(remove_empty_elements(tree)) == "(S (VP (VBD rose) (NP-EXT=1 (CD 5))))"
    assert remove_empty_elements(_tree("(NP (-NONE- *T*))")) is None


def test_canonicalize_indices():
    tree = _tree("(VP (VP (VBD paid) (NP-7 (CD 1)) (PP-4 (IN in) (NP (NNP May)))) (CC and) (VP (NP=7 (CD 2)) (PP=4 (IN in) (NP (NNP June)))))")
    assert serialize(canonicalize_indices(tree)) == (
        "(VP (VP (VBD paid) (NP-1 (CD 1)) (PP-2 (IN in) (NP (NNP May)))) (CC and) "
        "(VP (NP=1 (CD 2)) (PP=2 (IN in) (NP (NNP June)))))"
    )
