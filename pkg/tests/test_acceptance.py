"""Acceptance suite: one test per exit criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see per-criterion
output including timings.
"""

import itertools
import json
import random
import time
from pathlib import Path

import numpy as np
import pytest

from letalone.cli import run_pipeline
from letalone.exchange import ExchangeFile
from letalone.filtering import filter_corpus, get_scenario, scenario_catalog
from letalone.lexicon import bundled_lexicon
from letalone.ngram import train_ngram
from letalone.report import write_report
from letalone.scoring import (MINUS_M_PLUS_L, PLUS_M_PLUS_L, SuiteResult,
                              compute_item_scores, evaluate_suite,
                              ngram_exchange_records)
from letalone.templates import (CONDITIONS, FORMAL_PROPERTIES, expected_item_count,
                                generate_formal_suite, generate_semantic_suite)
from letalone.unigram import build_unigram

from conftest import (brute_force_evaluation, make_lexicon, make_pair_suite,
                      random_scores)

FIXTURE = Path(__file__).parent / "data" / "filter_fixture_50.txt"


def _exchange(records, fingerprint):
    exchange = ExchangeFile(model_fingerprint=fingerprint, tokenizer_spec="whitespace")
    for record in records:
        exchange.records[(record.item_id, record.condition.key)] = record
    return exchange


def test_zero_point_chain():
    """Unigram and order-1 reference scorer from one corpus: SLOR identically 0."""
    start = time.perf_counter()
    lexicon = make_lexicon(
        subjects=("I", "Max"), modifiers=("blue", "red", "green"),
        predicates=[
            {"verb": "lift", "domain": "weight", "nouns": ["crate", "box"]},
            {"verb": "afford", "domain": "price",
             "nouns": [{"text": "sunglasses", "plural": True}]},
        ],
    )
    suites = [generate_formal_suite(lexicon, p) for p in FORMAL_PROPERTIES]
    suites.append(generate_semantic_suite(lexicon))
    corpus = [item.full_text(cond) + "\n"
              for suite in suites for item in suite.items for cond in CONDITIONS]
    unigram = build_unigram(corpus)
    model = train_ngram(corpus, 1)
    for suite in suites:
        scores = compute_item_scores(
            suite, _exchange(ngram_exchange_records(suite, model), model.fingerprint()),
            unigram)
        for item_scores in scores.values():
            for value in item_scores.slor_by_condition.values():
                assert abs(value) <= 1e-9
            assert item_scores.delta_ltaln == 0.0
            assert item_scores.delta_and == 0.0
        result = evaluate_suite(suite, scores)
        assert result.accuracy == 1.0  # ties count correct by definition
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nPASS: zero-point chain (all SLOR 0, accuracy 1.0; {elapsed:.2f}s)")


def test_metric_oracle():
    """evaluate_suite equals an independent brute-force loop on 1,000 random sets."""
    start = time.perf_counter()
    rng = np.random.default_rng(20240917)
    checked = 0
    for trial in range(1000):
        suite = make_pair_suite(int(rng.integers(1, 7)))
        scores = random_scores(suite, rng)
        strict = bool(trial % 2)
        result = evaluate_suite(suite, scores, strict=strict)
        accuracy, correct, joint = brute_force_evaluation(suite, scores, strict=strict)
        assert abs(result.accuracy - accuracy) <= 1e-12
        for item in result.item_results:
            assert item.correct == correct[item.item_id]  # bit-for-bit booleans
            assert item.pair_correct == joint[item.item_id]
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    print(f"\nPASS: metric oracle (1000 randomized sets, {checked} items; {elapsed:.2f}s)")


def test_chance_level():
    """Independent continuous random SLORs converge to 25% both-orders accuracy."""
    start = time.perf_counter()
    suite = make_pair_suite(10_000)
    scores = random_scores(suite, np.random.default_rng(4242))
    result = evaluate_suite(suite, scores)
    assert result.k_twin_pairs == 10_000
    assert abs(result.accuracy - 0.25) <= 0.02
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nPASS: chance level (accuracy {result.accuracy:.4f} on 10,000 pairs; "
          f"{elapsed:.2f}s)")


def test_template_fidelity():
    """Verbatim example sentences, cross-product sizes, and default suite sizes."""
    start = time.perf_counter()

    # the five manipulated sentences for the example frame, verbatim
    expected = {
        "conj_clause": "I couldn't lift the blue crate let alone I couldn't lift the red crate.",
        "conj_vp": "I couldn't lift the blue crate let alone lift the red crate.",
        "conj_gap": "I couldn't lift the blue crate let alone you the red crate.",
        "cleft": "It is the blue crate let alone the red crate that I couldn't lift.",
        "npi": "I could lift the blue crate let alone the red crate.",
    }
    frame = make_lexicon()  # I / lift / crate / blue, red
    for property, sentence in expected.items():
        suite = generate_formal_suite(frame, property)
        item = next(i for i in suite.items if i.order == "canonical")
        assert item.sentences[MINUS_M_PLUS_L] == \
            "I couldn't lift the blue crate let alone the red crate."
        assert item.sentences[PLUS_M_PLUS_L] == sentence

    # combinatorial sizes on three toy lexicons, against direct enumeration
    shapes = [(2, 1, 2, 3), (1, 1, 1, 2), (3, 2, 2, 4)]
    for n_preds, n_subj, n_nouns, n_mods in shapes:
        lexicon = make_lexicon(
            subjects=[f"s{i}" for i in range(n_subj)],
            modifiers=[f"mod{i}" for i in range(n_mods)],
            predicates=[{"verb": f"v{i}", "domain": "weight",
                         "nouns": [f"n{j}" for j in range(n_nouns)]}
                        for i in range(n_preds)],
        )
        enumerated = sum(
            1 for _ in itertools.product(
                range(n_subj), range(n_preds), range(n_nouns),
                itertools.permutations(range(n_mods), 2)))
        formula = n_preds * n_subj * n_nouns * n_mods * (n_mods - 1)
        assert enumerated == formula
        assert expected_item_count(lexicon) == formula
        assert generate_formal_suite(lexicon, "npi").k == formula
        assert generate_semantic_suite(lexicon).k == formula

    # bundled defaults match the published suite sizes (twin-pair convention)
    formal = generate_formal_suite(bundled_lexicon("formal"), "cleft")
    assert formal.k_twin_pairs == 5217
    assert formal.k == 2 * 5217
    semantic = generate_semantic_suite(bundled_lexicon("semantic"))
    assert semantic.k_twin_pairs == 16887
    assert semantic.k == 2 * 16887
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nPASS: template fidelity (5 verbatim rows, sizes 5217/16887; {elapsed:.2f}s)")


# hand-counted removals for the 50-line fixture
FIXTURE_REMOVALS = {
    "NoPairedFocus": 9,
    "NoPairedFocComp": 13,
    "NoLet": 9,
    "NoAlone": 7,
    "NoLetorAlone": 12,
}
NEVER_REMOVED = ("Letting go is hard.", "She felt lonely after the move.",
                 "The outlet sparked briefly.", "Violets bloomed along the path.",
                 "He has an alone-ness about him.", "Let's not argue about it.")


def _synthetic_lines(n, seed=11):
    rng = random.Random(seed)
    benign = [
        "The cat sat on the mat and purred.",
        "Numbers rose through the quarter.",
        "A quiet street with tall trees.",
        "Letting go is hard.",
        "She felt lonely in the evening.",
        "Let's not start that again.",
    ]
    targets = [
        "I can't run, let alone fly.",
        "He earns much less now.",
        "Never mind the noise.",
        "Not to mention the cost.",
        "She scored more than him.",
        "It is less than ideal.",
        "Let me think about it.",
        "He stood ALONE by the door.",
    ]
    return [
        f"L{i:07d} "
        + (targets[rng.randrange(len(targets))] if rng.random() < 0.02
           else benign[rng.randrange(len(benign))])
        + "\n"
        for i in range(n)
    ]


def _removed_ids(lines, kept):
    kept_ids = {line[:8] for line in kept}
    return {line[:8] for line in lines} - kept_ids


def _filter_battery(lines):
    text = "".join(lines)
    removed = {}
    for scenario in scenario_catalog():
        kept, report = filter_corpus(text, scenario)
        # exact accounting
        assert report.lines_out == len(kept)
        assert report.lines_in == len(lines)
        # decoys with inflectional or bound material always survive
        survivors = "".join(kept)
        for decoy in ("Letting", "lonely", "Let's"):
            assert (decoy in survivors) == (decoy in text)
        # zero residue and idempotence
        again, report2 = filter_corpus(survivors, scenario)
        assert report2.units_removed == 0
        assert "".join(again) == survivors
        removed[scenario.name] = _removed_ids(lines, kept)
    # monotonicity over removed-unit sets
    assert removed["NoLetorAlone"] >= removed["NoLet"] | removed["NoAlone"]
    assert removed["NoPairedFocComp"] >= removed["NoPairedFocus"]


def test_filter_properties():
    """Idempotence, zero residue, monotonicity, and exact hand counts."""
    start = time.perf_counter()

    # 50-line fixture with hand-counted removals
    fixture_lines = FIXTURE.read_text(encoding="utf-8").splitlines(keepends=True)
    assert len(fixture_lines) == 50
    for scenario in scenario_catalog():
        kept, report = filter_corpus("".join(fixture_lines), scenario)
        assert report.lines_removed == FIXTURE_REMOVALS[scenario.name], scenario.name
        survivors = "".join(kept)
        for line in NEVER_REMOVED:
            assert line in survivors, (scenario.name, line)
    # per-pattern accounting on the fixture
    _, report = filter_corpus("".join(fixture_lines), get_scenario("NoPairedFocus"))
    assert report.pattern_unit_counts == {
        "let alone": 3, "much less": 3, "never mind": 1, "not to mention": 3}

    # synthetic corpora from 10^3 to 10^6 lines
    _filter_battery(_synthetic_lines(10**3))
    _filter_battery(_synthetic_lines(10**4))
    big_start = time.perf_counter()
    _filter_battery(_synthetic_lines(10**6))
    big_elapsed = time.perf_counter() - big_start
    assert big_elapsed < 30.0
    elapsed = time.perf_counter() - start
    print(f"\nPASS: filter properties (10^3-10^6 lines; 10^6 battery {big_elapsed:.1f}s; "
          f"total {elapsed:.1f}s)")


def test_report_layout_two_scorers(tmp_path):
    """Full scenario-by-property report layout with mean and CI over two scorers.

    Accuracy values require pretrained neural models and are deliberately
    not asserted; the layout and the mean-plus-CI cells are the contract.
    """
    start = time.perf_counter()
    lexicon = make_lexicon(
        subjects=("I",), modifiers=("blue", "red"),
        predicates=[
            {"verb": "lift", "domain": "weight", "nouns": ["crate"]},
            {"verb": "afford", "domain": "price", "nouns": ["watch"]},
        ],
    )
    lexicon_path = tmp_path / "lexicon.json"
    lexicon_path.write_text(json.dumps(lexicon.to_dict()))

    suites = [generate_formal_suite(lexicon, p) for p in FORMAL_PROPERTIES]
    suites.append(generate_semantic_suite(lexicon))
    corpus_lines = [item.full_text(cond) + "\n"
                    for suite in suites for item in suite.items for cond in CONDITIONS]
    corpus_lines += ["Plain filler text here.\n"] * 5
    corpus_path = tmp_path / "corpus.txt"
    corpus_path.write_text("".join(corpus_lines))

    scenario_names = ["NoFiltering"] + [s.name for s in scenario_catalog()]
    results = []
    for scenario in scenario_names:
        outdir = tmp_path / f"run-{scenario}"
        config = {
            "output_dir": str(outdir),
            "lexicon": str(lexicon_path),
            "properties": "all",
            "corpus": str(corpus_path),
            "scenario": scenario,
            "scorers": [
                {"seed": "1", "order": 1, "discount": 0.75},
                {"seed": "2", "order": 2, "discount": 0.75},
            ],
        }
        run_pipeline(config, tmp_path)
        results.extend(SuiteResult.load(path)
                       for path in sorted((outdir / "results").glob("*.result.jsonl")))

    paths = write_report(results, tmp_path / "combined")
    report = paths["report"].read_text()

    # property-table layout: six property rows with predictions and +/- cells
    for title in ("NPI", "Conjunction (Clause)", "Clefting", "Conjunction (VP)",
                  "Conjunction (Elided VP)", "Scalar Semantics"):
        assert title in report
    assert "near 100%" in report and "near 25%" in report
    # grid layout: one row per filtering scenario
    for scenario in scenario_names:
        assert scenario in report
    # mean +/- CI cells over the two scorers
    assert report.count("±") >= 36  # 6 scenarios x 6 properties
    assert "seeds: 1, 2" in report
    # per-item dumps for distribution plots exist alongside
    assert paths["item_deltas"].read_text().count("\n") > 1
    elapsed = time.perf_counter() - start
    print(f"\nPASS: report layout (6x6 grid, mean ± CI over two scorers; "
          f"{elapsed:.1f}s)")
