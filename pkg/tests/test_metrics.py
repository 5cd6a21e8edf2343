import random

import pytest

from evex.events import ArgumentPair, ContextInstance, EventFrame, Trigger
from evex.metrics import (
    ARG_C,
    ARG_I,
    SUBTASKS,
    TRIG_C,
    TRIG_I,
    evaluate_corpus,
    f1_from_counts,
    match_counts,
)

from util import oracle_corpus_counts, oracle_match, random_gold_corpus, random_pred_frames


def fig1_frames():
    """Two events with three arguments total: a transport (went -> home) and
    an attack (killed -> father-in-law, home)."""
    transport = EventFrame(
        Trigger("went", "Transport"), (ArgumentPair("Destination", "home"),)
    )
    attack = EventFrame(
        Trigger("killed", "Attack"),
        (ArgumentPair("Agent", "father-in-law"), ArgumentPair("Place", "home")),
    )
    return [transport, attack]


def test_perfect_prediction_on_two_event_example():
    frames = fig1_frames()
    assert match_counts(frames, frames, TRIG_C) == (2, 2, 2)
    assert match_counts(frames, frames, ARG_C) == (3, 3, 3)


def test_word_match_type_mismatch():
    pred = [EventFrame(Trigger("went", "Attack"))]
    gold = [EventFrame(Trigger("went", "Movement_Transport"))]
    assert match_counts(pred, gold, TRIG_I) == (1, 1, 1)
    assert match_counts(pred, gold, TRIG_C) == (0, 1, 1)


def test_argument_identification_vs_classification():
    pred = [EventFrame(Trigger("hit", "Attack"), (ArgumentPair("Destination", "home"),))]
    gold = [EventFrame(Trigger("hit", "Attack"), (ArgumentPair("Place", "home"),))]
    assert match_counts(pred, gold, ARG_I) == (1, 1, 1)
    assert match_counts(pred, gold, ARG_C) == (0, 1, 1)
    assert (match_counts(pred, gold, ARG_I)) == oracle_match(pred, gold, ARG_I)


def test_multiset_matching_caps_duplicates():
    gold = [EventFrame(Trigger("fired", "Attack"))]
    pred = [EventFrame(Trigger("fired", "Attack")), EventFrame(Trigger("fired", "Attack"))]
    n_correct, n_pred, n_gold = match_counts(pred, gold, TRIG_C)
    assert (n_correct, n_pred, n_gold) == (1, 2, 1)


def test_f1_hand_example():
    assert f1_from_counts(3, 4, 6) == (0.75, 0.5, 0.6)


def test_f1_degenerate_cases():
    assert f1_from_counts(0, 0, 5) == (0.0, 0.0, 0.0)
    assert f1_from_counts(5, 5, 5) == (1.0, 1.0, 1.0)
    assert f1_from_counts(0, 0, 0) == (0.0, 0.0, 0.0)


def test_f1_precondition_violations():
    with pytest.raises(ValueError):
        f1_from_counts(3, 2, 6)
    with pytest.raises(ValueError):
        f1_from_counts(-1, 2, 2)


def test_identical_predictions_score_one():
    rng = random.Random(41)
    gold = random_gold_corpus(rng)
    predictions = [(g.doc_id, list(g.gold_frames)) for g in gold]
    report = evaluate_corpus(predictions, gold)
    for name in SUBTASKS:
        score = report.score(name)
        if score.n_gold:
            assert score.f1 == 1.0


def test_empty_predictions_preserve_gold_counts():
    rng = random.Random(42)
    gold = random_gold_corpus(rng)
    report = evaluate_corpus([], gold)
    total_gold_triggers = sum(len(g.gold_frames) for g in gold)
    assert report.trig_c.n_gold == total_gold_triggers
    assert report.trig_c.f1 == 0.0 and report.trig_c.n_pred == 0


def test_unknown_doc_id_raises():
    gold = [ContextInstance("d1", "a b c", ())]
    with pytest.raises(ValueError, match="ghost"):
        evaluate_corpus([("ghost", [])], gold)


def test_duplicate_prediction_rows_concatenate():
    gold = [
        ContextInstance(
            "d1", "x fired y", (EventFrame(Trigger("fired", "Attack")), EventFrame(Trigger("x", "B")))
        )
    ]
    rows = [
        ("d1", [EventFrame(Trigger("fired", "Attack"))]),
        ("d1", [EventFrame(Trigger("x", "B"))]),
    ]
    report = evaluate_corpus(rows, gold)
    assert report.trig_c.n_pred == 2 and report.trig_c.n_correct == 2


def test_corpus_evaluation_matches_bruteforce_oracle():
    rng = random.Random(43)
    for _ in range(50):
        gold = random_gold_corpus(rng, n=rng.randint(3, 15))
        predictions = random_pred_frames(rng, gold)
        report = evaluate_corpus(list(predictions.items()), gold)
        for name in SUBTASKS:
            expected = oracle_corpus_counts(predictions, gold, name)
            got = report.score(name)
            assert (got.n_correct, got.n_pred, got.n_gold) == expected


def test_ordering_invariants_on_random_corpora():
    rng = random.Random(44)
    for _ in range(50):
        gold = random_gold_corpus(rng, n=rng.randint(3, 12))
        predictions = random_pred_frames(rng, gold)
        report = evaluate_corpus(list(predictions.items()), gold)
        assert report.arg_c.n_correct <= report.arg_i.n_correct
        assert report.trig_c.n_correct <= report.trig_i.n_correct


def test_permutation_invariance():
    rng = random.Random(45)
    gold = random_gold_corpus(rng, n=10)
    predictions = random_pred_frames(rng, gold)
    rows = list(predictions.items())
    base = evaluate_corpus(rows, gold).to_dict()
    rng.shuffle(rows)
    shuffled_gold = list(gold)
    rng.shuffle(shuffled_gold)
    shuffled_rows = [(doc, list(reversed(frames))) for doc, frames in rows]
    assert evaluate_corpus(shuffled_rows, shuffled_gold).to_dict() == base
