import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from letalone.exchange import ExchangeFile, TokenRecord
from letalone.scoring import (ItemScores, MINUS_M_MINUS_L, MINUS_M_PLUS_L,
                              PLUS_M_MINUS_L, PLUS_M_PLUS_L, ScoredSentence,
                              ScoringError, SuiteResult, compute_item_scores,
                              delta_slor, evaluate_suite, item_correct,
                              ngram_exchange_records, slor)
from letalone.ngram import train_ngram
from letalone.templates import CONDITIONS, Suite, generate_formal_suite
from letalone.unigram import build_unigram

from conftest import (brute_force_evaluation, make_lexicon, make_pair_suite,
                      random_scores)

finite = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)


def test_slor_hand_computation():
    value = slor(-2.0, [math.log(0.1), math.log(0.2)])
    assert value == pytest.approx((-2.0 - math.log(0.02)) / 2)
    assert value == pytest.approx(0.956, abs=5e-4)


def test_slor_zero_when_model_equals_unigram():
    unigram_lps = [math.log(0.3), math.log(0.5), math.log(0.01)]
    assert slor(sum(unigram_lps), unigram_lps) == 0.0


def test_slor_per_token_normalization():
    lps = [math.log(0.1), math.log(0.25), math.log(0.4)]
    once = slor(-3.0, lps)
    doubled = slor(-6.0, lps + lps)
    assert doubled == pytest.approx(once)


def test_slor_rejects_empty_and_non_finite():
    with pytest.raises(ScoringError, match="empty"):
        slor(-1.0, [])
    with pytest.raises(ScoringError):
        slor(float("nan"), [-1.0])
    with pytest.raises(ScoringError):
        slor(-1.0, [float("-inf")])


def test_delta_slor_examples():
    assert delta_slor(1.2, 0.5) == pytest.approx(0.7)
    assert delta_slor(0.4, 0.4) == 0.0
    with pytest.raises(ScoringError):
        delta_slor(float("inf"), 0.0)


@given(finite, finite)
def test_delta_slor_antisymmetric(a, b):
    assert delta_slor(a, b) == -delta_slor(b, a)


def test_item_correct_tie_inclusive():
    assert item_correct(0.7, 0.1)
    assert not item_correct(0.1, 0.7)
    assert item_correct(0.3, 0.3)
    assert not item_correct(0.3, 0.3, strict=True)


def test_scored_sentence_invariant():
    s = ScoredSentence(tokens=("a", "b"), lm_logprob_total=-2.0,
                       unigram_logprob_total=-3.0)
    assert s.n == 2
    assert s.slor == (-2.0 - -3.0) / 2
    with pytest.raises(ScoringError):
        ScoredSentence(tokens=(), lm_logprob_total=0.0, unigram_logprob_total=0.0)


def test_item_scores_computes_both_deltas():
    scores = ItemScores.from_condition_slors("item", {
        PLUS_M_PLUS_L: 0.5, MINUS_M_PLUS_L: 1.2,
        PLUS_M_MINUS_L: 0.9, MINUS_M_MINUS_L: 1.0,
    })
    assert scores.delta_ltaln == pytest.approx(0.7)
    assert scores.delta_and == pytest.approx(0.1)
    with pytest.raises(ScoringError, match="missing"):
        ItemScores.from_condition_slors("item", {PLUS_M_PLUS_L: 0.5})


def test_evaluate_matches_brute_force_on_randomized_inputs():
    rng = np.random.default_rng(7)
    for trial in range(200):
        suite = make_pair_suite(int(rng.integers(1, 9)))
        scores = random_scores(suite, rng)
        if trial % 5 == 0:
            # inject exact ties to exercise the >= path
            some = suite.items[0].item_id
            tied = dict(scores[some].slor_by_condition)
            tied[PLUS_M_PLUS_L] = tied[MINUS_M_PLUS_L]
            tied[PLUS_M_MINUS_L] = tied[MINUS_M_MINUS_L]
            scores[some] = ItemScores.from_condition_slors(some, tied)
        for strict in (False, True):
            result = evaluate_suite(suite, scores, strict=strict)
            acc, correct, joint = brute_force_evaluation(suite, scores, strict=strict)
            assert result.accuracy == acc
            for item_result in result.item_results:
                assert item_result.correct == correct[item_result.item_id]
                assert item_result.pair_correct == joint[item_result.item_id]


def test_four_pairs_exactly_one_jointly_correct():
    suite = make_pair_suite(4)
    deltas = {}
    for i in range(4):
        for tag in ("a", "b"):
            # only pair 0 is correct in both orders
            good = i == 0 or (i == 1 and tag == "a") or (i == 2 and tag == "b")
            deltas[f"npi.t{i}.{tag}"] = (0.8, 0.1) if good else (0.0, 0.5)
    scores = {}
    for item in suite.items:
        d_la, d_and = deltas[item.item_id]
        scores[item.item_id] = ItemScores.from_condition_slors(item.item_id, {
            MINUS_M_PLUS_L: d_la, PLUS_M_PLUS_L: 0.0,
            MINUS_M_MINUS_L: d_and, PLUS_M_MINUS_L: 0.0,
        })
    result = evaluate_suite(suite, scores)
    assert result.accuracy == 0.25
    assert result.k_twin_pairs == 4


def test_all_pairs_correct_gives_one():
    suite = make_pair_suite(3)
    scores = {
        item.item_id: ItemScores.from_condition_slors(item.item_id, {
            MINUS_M_PLUS_L: 1.0, PLUS_M_PLUS_L: 0.0,
            MINUS_M_MINUS_L: 0.0, PLUS_M_MINUS_L: 0.0,
        })
        for item in suite.items
    }
    assert evaluate_suite(suite, scores).accuracy == 1.0


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_accuracy_in_unit_interval_and_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    suite = make_pair_suite(5)
    scores = random_scores(suite, rng)
    result = evaluate_suite(suite, scores)
    assert 0.0 <= result.accuracy <= 1.0
    shuffled = Suite(property=suite.property, items=tuple(reversed(suite.items)),
                     lexicon_fingerprint=suite.lexicon_fingerprint)
    assert evaluate_suite(shuffled, scores).accuracy == result.accuracy


@given(finite, finite, finite, finite, st.floats(min_value=-10, max_value=10,
                                                 allow_nan=False, allow_infinity=False))
def test_location_invariance_of_deltas(s1, s2, s3, s4, bonus):
    base = ItemScores.from_condition_slors("x", {
        PLUS_M_PLUS_L: s1, MINUS_M_PLUS_L: s2,
        PLUS_M_MINUS_L: s3, MINUS_M_MINUS_L: s4,
    })
    shifted = ItemScores.from_condition_slors("x", {
        PLUS_M_PLUS_L: s1 + bonus, MINUS_M_PLUS_L: s2 + bonus,
        PLUS_M_MINUS_L: s3 + bonus, MINUS_M_MINUS_L: s4 + bonus,
    })
    assert shifted.delta_ltaln == pytest.approx(base.delta_ltaln, abs=1e-9)
    assert shifted.delta_and == pytest.approx(base.delta_and, abs=1e-9)
    margin = abs(base.delta_ltaln - base.delta_and)
    if margin > 1e-9:
        assert (item_correct(shifted.delta_ltaln, shifted.delta_and)
                == item_correct(base.delta_ltaln, base.delta_and))


def test_missing_score_names_the_item():
    suite = make_pair_suite(2)
    scores = random_scores(suite, np.random.default_rng(0))
    del scores["npi.t1.b"]
    with pytest.raises(ScoringError, match="npi.t1.b"):
        evaluate_suite(suite, scores)


def test_missing_twin_is_structural_error():
    suite = make_pair_suite(2)
    broken = Suite(property=suite.property, items=suite.items[:3],
                   lexicon_fingerprint=suite.lexicon_fingerprint)
    scores = random_scores(broken, np.random.default_rng(0))
    with pytest.raises(ScoringError, match="twin"):
        evaluate_suite(broken, scores)


def _exchange_for(suite, model, unigram):
    records = ngram_exchange_records(suite, model)
    exchange = ExchangeFile(model_fingerprint=model.fingerprint(),
                            tokenizer_spec="whitespace")
    for record in records:
        exchange.records[(record.item_id, record.condition.key)] = record
    return exchange


def test_end_to_end_zero_point_with_unigram_reference():
    lexicon = make_lexicon(subjects=("I", "Max"), modifiers=("blue", "red", "green"))
    suite = generate_formal_suite(lexicon, "cleft")
    corpus = [item.full_text(cond) + "\n" for item in suite.items for cond in CONDITIONS]
    unigram = build_unigram(corpus)
    model = train_ngram(corpus, 1)
    scores = compute_item_scores(suite, _exchange_for(suite, model, unigram), unigram)
    for item_scores in scores.values():
        for value in item_scores.slor_by_condition.values():
            assert value == 0.0
        assert item_scores.delta_ltaln == 0.0
        assert item_scores.delta_and == 0.0
    assert evaluate_suite(suite, scores).accuracy == 1.0


def test_compute_item_scores_rejects_non_finite_model_output():
    suite = make_pair_suite(1)
    unigram = build_unigram(
        [item.full_text(cond) + "\n" for item in suite.items for cond in CONDITIONS])
    exchange = ExchangeFile(model_fingerprint="fp", tokenizer_spec="whitespace")
    for item in suite.items:
        for cond in CONDITIONS:
            tokens = tuple(item.sentences[cond].split())
            lps = tuple([-1.0] * (len(tokens) - 1) + [float("-inf")])
            exchange.records[(item.item_id, cond.key)] = TokenRecord(
                item.item_id, cond, tokens, lps, "fp")
    with pytest.raises((ScoringError, Exception), match="non-finite|finite"):
        compute_item_scores(suite, exchange, unigram)


def test_suite_result_save_load_round_trip(tmp_path):
    suite = make_pair_suite(3)
    scores = random_scores(suite, np.random.default_rng(3))
    result = evaluate_suite(suite, scores, model_fingerprint="m", unigram_fingerprint="u",
                            scenario="NoFiltering", seed="1")
    path = tmp_path / "result.jsonl"
    result.save(path)
    loaded = SuiteResult.load(path)
    assert loaded.accuracy == result.accuracy
    assert loaded.k == result.k
    assert loaded.k_twin_pairs == result.k_twin_pairs
    assert loaded.item_results == result.item_results
    assert (loaded.scenario, loaded.seed) == ("NoFiltering", "1")
