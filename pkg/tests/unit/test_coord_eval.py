# Copyright 2025 The acc-treekit Authors
# Licensed under the Apache License, Version 2.0

import pydantic
import pytest

from acc_treekit.data import sample_path
from acc_treekit.errors import GoldFormatError, TokenMismatchError
from acc_treekit.evaluation.coord_eval import (
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
from acc_treekit.treebank_io import parse_trees

RESTAURANT = "A restaurant served ( 9 pizzas during lunch ) and ( 6 during dinner ) today"
ALL_METRICS = ["conjuncts", "conjuncts-acc", "args", "internal", "accph", "accph-strict"]


def _tree(text):
    (parsed,) = parse_trees(text)
    return parsed


def _phrase(*conjuncts, is_acc=False):
    return CoordPhrase(
        tuple(Conjunct(ArgSpan(*span), tuple(ArgSpan(*a) for a in args)) for span, args in conjuncts),
        is_acc=is_acc,
    )


def test_parse_gold_acc_line():
    (gold,) = parse_gold("Mary paid ( [ $ 11.08 ] [ for berries ] ) , and ( [ $ 9.31 ] [ for peaches ] ) .")
    assert gold.tokens == ("Mary", "paid", "$", "11.08", "for", "berries", ",", "and", "$", "9.31", "for", "peaches", ".")
    (phrase,) = gold.phrases
    assert phrase.is_acc
    assert phrase.spans == (ArgSpan(2, 6), ArgSpan(8, 12))
    assert phrase.args == ((ArgSpan(2, 4), ArgSpan(4, 6)), (ArgSpan(8, 10), ArgSpan(10, 12)))


def test_parse_gold_plain_lines():
    (wendy,) = parse_gold("Wendy ( ran 19 miles ) and ( walked 9 miles ) .")
    (phrase,) = wendy.phrases
    assert phrase.spans == (ArgSpan(1, 4), ArgSpan(5, 8))
    assert phrase.args == ((), ())
    assert not phrase.is_acc

    (restaurant,) = parse_gold(RESTAURANT)
    assert len(restaurant.tokens) == 12
    assert restaurant.phrases[0].spans == (ArgSpan(3, 7), ArgSpan(8, 11))


def test_parse_gold_groups_by_separators():
    (gold,) = parse_gold("( a ) and ( b ) saw ( c ) , ( d ) , but ( e )")
    assert [p.spans for p in gold.phrases] == [
        (ArgSpan(0, 1), ArgSpan(2, 3)),
        (ArgSpan(4, 5), ArgSpan(6, 7), ArgSpan(9, 10)),
    ]
    assert not any(p.is_acc for p in gold.phrases)


def test_parse_gold_skips_blank_lines_and_counts_plain_sentences():
    golds = parse_gold("\nno coordination here\n\n( a ) or ( b )\n")
    assert len(golds) == 2
    assert golds[0].phrases == ()
    assert gold_summary(golds)["coordination_sentences"] == 1


@pytest.mark.parametrize(
    "line, message",
    [
        ("( a ( b ) ) and ( c )", "nested round brackets"),
        ("a ) and ( b )", "without matching '('"),
        ("( [ a ) ] and ( b )", "inside an argument"),
        ("( ) and ( b )", "empty conjunct"),
        ("[ a ] ( b ) and ( c )", "outside a conjunct"),
        ("( [ [ a ] ] ) and ( b )", "nested square brackets"),
        ("( a ] ) and ( b )", "without matching '['"),
        ("( [ ] a ) and ( b )", "empty argument"),
        ("( a ) and ( b", "unclosed bracket"),
        ("he ( ran ) fast", "no sibling"),
        ("( a ) then ( b ) x ( c )", "no sibling"),
    ],
)
def test_parse_gold_errors(line, message):
    with pytest.raises(GoldFormatError) as excinfo:
        parse_gold("( ok ) and ( fine )\n" + line)
    assert excinfo.value.line == 2
    assert message in str(excinfo.value)


def test_types_validate_spans():
    with pytest.raises(ValueError):
        ArgSpan(3, 3)
    with pytest.raises(ValueError):
        Conjunct(ArgSpan(0, 2), (ArgSpan(1, 3),))
    with pytest.raises(ValueError):
        CoordPhrase((Conjunct(ArgSpan(0, 2)),))
    with pytest.raises(ValueError):
        _phrase(((2, 4), ()), ((0, 2), ()))
    with pytest.raises(ValueError):
        CoordGold(("a", "b"), (_phrase(((0, 1), ()), ((1, 3), ())),))


def test_eval_report_bounds():
    assert EvalReport(name="x", numerator=0, denominator=0).value == 0.0
    assert EvalReport(name="x", numerator=1, denominator=4).value == 0.25
    with pytest.raises(pydantic.ValidationError):
        EvalReport(name="x", numerator=2, denominator=1)


def test_boundary_error_is_not_credited():
    (gold,) = parse_gold(RESTAURANT)
    assert gold.phrases[0].spans == (ArgSpan(3, 7), ArgSpan(8, 11))
    pred = CoordGold(gold.tokens, (_phrase(((3, 7), ()), ((8, 12), ())),))
    report = conjunct_recall([gold], [pred])
    assert (report.numerator, report.denominator) == (0, 1)


def test_extract_plain_coordination():
    tree = _tree(
        "(S (NP-SBJ (NNP Wendy)) (VP (VP (VBD ran) (NP (CD 19) (NNS miles))) (CC and)"
        " (VP (VBD walked) (NP (CD 9) (NNS miles)))) (. .))"
    )
    pred = extract_predicted(tree)
    assert pred.tokens[0] == "Wendy"
    (phrase,) = pred.phrases
    assert phrase.spans == (ArgSpan(1, 4), ArgSpan(5, 8))
    assert not phrase.is_acc

    with_args = extract_predicted(tree, conjunct_args=True)
    assert with_args.phrases[0].args == ((ArgSpan(2, 4),), (ArgSpan(6, 8),))


def test_extract_acc_phrase(expected_acc_trees):
    pred = extract_predicted(expected_acc_trees[0])
    (phrase,) = pred.phrases
    assert phrase.is_acc
    assert phrase.spans == (ArgSpan(6, 10), ArgSpan(11, 15))
    assert phrase.args == ((ArgSpan(6, 8), ArgSpan(8, 10)), (ArgSpan(11, 13), ArgSpan(13, 15)))


def test_extract_trims_punctuation_and_ignores_but():
    tree = _tree("(S (NP (NP (NNS cats)) (, ,) (NP (NNS dogs) (, ,)) (CC or) (NP (NNS mice))) (VP (VBD ran)))")
    (phrase,) = extract_predicted(tree).phrases
    assert phrase.spans == (ArgSpan(0, 1), ArgSpan(2, 3), ArgSpan(5, 6))
    but = _tree("(S (NP (NP (NNS cats)) (CC but) (NP (NNS dogs))) (VP (VBD ran)))")
    assert extract_predicted(but).phrases == ()


def test_extract_skips_leading_preconjunction():
    tree = _tree("(S (NP (DT both) (NP (NNS cats)) (CC and) (NP (NNS dogs))) (VP (VBD ran)))")
    (phrase,) = extract_predicted(tree).phrases
    assert phrase.spans == (ArgSpan(1, 2), ArgSpan(3, 4))
    plain = _tree("(S (NP (NP (NNS cats)) (CC and) (DT both) (NP (NNS dogs))) (VP (VBD ran)))")
    assert extract_predicted(plain).phrases[0].spans == (ArgSpan(0, 1), ArgSpan(2, 3), ArgSpan(3, 4))


def test_extract_checks_tokens(expected_acc_trees):
    with pytest.raises(TokenMismatchError):
        extract_predicted(expected_acc_trees[0], tokens=["Inflation"])


def test_sample_scores_against_our_gold(our_gold, expected_acc_trees):
    pred = [extract_predicted(t, g.tokens) for g, t in zip(our_gold, expected_acc_trees)]
    reports = evaluate(our_gold, pred, ALL_METRICS + ["evalb"])
    scores = {name: (r.numerator, r.denominator) for name, r in reports.items()}
    assert scores == {
        "conjuncts": (11, 12),
        "conjuncts-acc": (5, 5),
        "args": (22, 22),
        "internal": (5, 5),
        "accph-recall": (5, 5),
        "accph-precision": (5, 5),
        "accph-strict-recall": (5, 5),
        "accph-strict-precision": (5, 5),
    }


def test_gold_summary(our_gold):
    assert gold_summary(our_gold) == {
        "sentences": 12,
        "coordination_sentences": 12,
        "acc_sentences": 5,
        "phrases": 12,
        "acc_phrases": 5,
        "arguments": 22,
    }


def test_ptb_output_scored_with_conjunct_args(ptb_gold, sample_trees):
    pred = [extract_predicted(t, g.tokens, conjunct_args=True) for g, t in zip(ptb_gold, sample_trees)]
    assert conjunct_recall(ptb_gold, pred).numerator == 11
    assert argument_recall(ptb_gold, pred).numerator == 22
    internal = internal_given_boundaries(ptb_gold, pred)
    # The first conjunct of sentence 1 also yields [up] and [insurance costs].
    assert (internal.numerator, internal.denominator) == (4, 5)
    recall, precision = accph_identification(ptb_gold, pred)
    assert (recall.numerator, recall.denominator) == (0, 5)
    assert precision.denominator == 0 and precision.value == 0.0


def test_mismatched_sentences_are_rejected(our_gold):
    with pytest.raises(TokenMismatchError):
        conjunct_recall(our_gold, our_gold[:-1])
    shifted = [CoordGold(g.tokens[1:]) for g in our_gold]
    with pytest.raises(TokenMismatchError):
        argument_recall(our_gold, shifted)


def test_unknown_metric(our_gold):
    with pytest.raises(ValueError):
        evaluate(our_gold, our_gold, ["bleu"])


def test_self_evaluation_is_perfect(random_eval_pairs):
    golds = [g for g, _ in random_eval_pairs]
    for report in evaluate(golds, golds, ALL_METRICS).values():
        assert report.numerator == report.denominator


def test_metrics_agree_with_set_counting(random_eval_pairs):
    golds = [g for g, _ in random_eval_pairs]
    preds = [p for _, p in random_eval_pairs]
    reports = evaluate(golds, preds, ALL_METRICS)

    conjuncts = acc_found = args_found = acc_total = strict = 0
    for gold, pred in random_eval_pairs:
        spans = {p.spans for p in pred.phrases}
        acc_spans = {p.spans for p in pred.phrases if p.is_acc}
        acc_exact = {(p.spans, p.args) for p in pred.phrases if p.is_acc}
        predicted_args = {a for p in pred.phrases for args in p.args for a in args}
        conjuncts += sum(p.spans in spans for p in gold.phrases)
        for phrase in gold.phrases:
            if not phrase.is_acc:
                continue
            acc_total += 1
            acc_found += phrase.spans in acc_spans
            strict += (phrase.spans, phrase.args) in acc_exact
            args_found += sum(a in predicted_args for args in phrase.args for a in args)

    assert reports["conjuncts"].numerator == conjuncts
    assert reports["accph-recall"].numerator == acc_found
    assert reports["accph-recall"].denominator == acc_total
    assert reports["accph-strict-recall"].numerator == strict
    assert reports["args"].numerator == args_found
    for report in reports.values():
        assert 0.0 <= report.value <= 1.0


@pytest.fixture
def our_gold():
    return parse_gold(sample_path("gold_acc_our.txt").read_text())


@pytest.fixture
def ptb_gold():
    return parse_gold(sample_path("gold_acc_ptb.txt").read_text())
