"""SLOR, delta-SLOR, and suite accuracy.

Sentence score: SLOR = (log p_model(sentence | context) - sum of unigram
log probabilities of the sentence tokens) / token count. The delta for a
conjunction choice is SLOR(-m) - SLOR(+m); an item is correct when the
let-alone delta is at least the and-delta, and a twin pair counts toward
accuracy only when both modifier orders are correct. Ties satisfy the
default comparison; a strict mode is available for robustness analysis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping, Sequence

from .exchange import ExchangeFile, TokenRecord, require_valid
from .ngram import NGramModel
from .templates import CONDITIONS, ConditionLabel, Suite
from .unigram import UnigramModel, tokenize

RESULT_FORMAT = "letalone-result"
FORMAT_VERSION = 1

PLUS_M_PLUS_L = ConditionLabel(manip=True, ltaln=True)
MINUS_M_PLUS_L = ConditionLabel(manip=False, ltaln=True)
PLUS_M_MINUS_L = ConditionLabel(manip=True, ltaln=False)
MINUS_M_MINUS_L = ConditionLabel(manip=False, ltaln=False)


class ScoringError(ValueError):
    """Scoring aborted: bad input for an identifiable item or sentence."""


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ScoringError(f"non-finite {name}: {value!r}")


def slor(lm_logprob_total: float, token_unigram_logprobs: Sequence[float]) -> float:
    """Per-token log-odds of the model against the unigram baseline."""
    n = len(token_unigram_logprobs)
    if n == 0:
        raise ScoringError("cannot compute SLOR of an empty token sequence")
    _require_finite("model log-probability", lm_logprob_total)
    for lp in token_unigram_logprobs:
        _require_finite("unigram log-probability", lp)
    return (lm_logprob_total - sum(token_unigram_logprobs)) / n


def delta_slor(s_minus_manip: float, s_plus_manip: float) -> float:
    """SLOR drop caused by the grammatical manipulation."""
    _require_finite("SLOR", s_minus_manip)
    _require_finite("SLOR", s_plus_manip)
    return s_minus_manip - s_plus_manip


def item_correct(delta_ltaln: float, delta_and: float, *, strict: bool = False) -> bool:
    """True when the manipulation hurts more under let-alone than under and.

    Ties count as correct (the comparison is >=); ``strict`` switches to >
    for robustness analysis only.
    """
    _require_finite("delta", delta_ltaln)
    _require_finite("delta", delta_and)
    if strict:
        return delta_ltaln > delta_and
    return delta_ltaln >= delta_and


@dataclass(frozen=True)
class ScoredSentence:
    """Target-sentence tokens with model and unigram log-probability totals.

    Context tokens are excluded from ``tokens`` and from both totals.
    """

    tokens: tuple[str, ...]
    lm_logprob_total: float
    unigram_logprob_total: float

    def __post_init__(self):
        if not self.tokens:
            raise ScoringError("a scored sentence needs at least one token")
        _require_finite("model log-probability", self.lm_logprob_total)
        _require_finite("unigram log-probability", self.unigram_logprob_total)

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def slor(self) -> float:
        return (self.lm_logprob_total - self.unigram_logprob_total) / self.n


@dataclass(frozen=True)
class ItemScores:
    item_id: str
    slor_by_condition: dict[ConditionLabel, float]
    delta_ltaln: float
    delta_and: float

    @classmethod
    def from_condition_slors(cls, item_id: str,
                             slors: Mapping[ConditionLabel, float]) -> "ItemScores":
        missing = [c.key for c in CONDITIONS if c not in slors]
        if missing:
            raise ScoringError(f"item {item_id}: missing SLOR for conditions {missing}")
        return cls(
            item_id=item_id,
            slor_by_condition=dict(slors),
            delta_ltaln=delta_slor(slors[MINUS_M_PLUS_L], slors[PLUS_M_PLUS_L]),
            delta_and=delta_slor(slors[MINUS_M_MINUS_L], slors[PLUS_M_MINUS_L]),
        )


def compute_item_scores(suite: Suite, exchange: ExchangeFile,
                        unigram: UnigramModel) -> dict[str, ItemScores]:
    """Assemble per-item SLOR scores from an exchange file and a unigram model.

    The exchange file is validated against the suite first; a non-finite
    model output aborts with a diagnostic naming the item rather than
    propagating NaN into the metrics.
    """
    require_valid(exchange, suite)
    scores = {}
    for item in suite.items:
        slors = {}
        for cond in CONDITIONS:
            record = exchange.record_for(item.item_id, cond)
            try:
                unigram_lps = [unigram.logprob(token) for token in record.tokens]
            except KeyError as exc:
                raise ScoringError(
                    f"item {item.item_id} condition {cond.key}: {exc.args[0]}") from exc
            sentence = ScoredSentence(
                tokens=record.tokens,
                lm_logprob_total=sum(record.logprobs),
                unigram_logprob_total=sum(unigram_lps),
            )
            slors[cond] = sentence.slor
        scores[item.item_id] = ItemScores.from_condition_slors(item.item_id, slors)
    return scores


def ngram_exchange_records(suite: Suite, model: NGramModel, *,
                           lowercase: bool = False) -> list[TokenRecord]:
    """Score every condition sentence of a suite with the n-gram scorer.

    Context sentences condition the target through the model but are not
    emitted; target tokens are whitespace tokens, matching the unigram
    side of the pipeline.
    """
    fingerprint = model.fingerprint()
    records = []
    for item in suite.items:
        for cond in CONDITIONS:
            context_tokens = tokenize(item.context_sentences[cond], lowercase=lowercase)
            target_tokens = tokenize(item.sentences[cond], lowercase=lowercase)
            if not target_tokens:
                raise ScoringError(
                    f"item {item.item_id} condition {cond.key}: empty target sentence")
            logprobs = model.score(context_tokens, target_tokens)
            records.append(TokenRecord(
                item_id=item.item_id,
                condition=cond,
                tokens=tuple(target_tokens),
                logprobs=tuple(logprobs),
                model_fingerprint=fingerprint,
            ))
    return records


@dataclass(frozen=True)
class ItemResult:
    item_id: str
    twin_id: str
    order: str
    slor_by_condition: dict[ConditionLabel, float]
    delta_ltaln: float
    delta_and: float
    correct: bool
    pair_correct: bool


@dataclass
class SuiteResult:
    property: str
    k: int
    k_twin_pairs: int
    accuracy: float
    strict: bool
    item_results: tuple[ItemResult, ...]
    model_fingerprint: str = ""
    unigram_fingerprint: str = ""
    lexicon_fingerprint: str = ""
    scenario: str = ""
    seed: str = ""

    def save(self, destination: str | Path | IO[str]) -> None:
        if hasattr(destination, "write"):
            self._write(destination)
        else:
            with open(destination, "w", encoding="utf-8") as f:
                self._write(f)

    def _write(self, f: IO[str]) -> None:
        header = {
            "record": "result_header",
            "format": RESULT_FORMAT,
            "format_version": FORMAT_VERSION,
            "property": self.property,
            "k": self.k,
            "k_twin_pairs": self.k_twin_pairs,
            "accuracy": self.accuracy,
            "strict": self.strict,
            "model_fingerprint": self.model_fingerprint,
            "unigram_fingerprint": self.unigram_fingerprint,
            "lexicon_fingerprint": self.lexicon_fingerprint,
            "scenario": self.scenario,
            "seed": self.seed,
        }
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for res in self.item_results:
            f.write(json.dumps({
                "record": "item_result",
                "item_id": res.item_id,
                "twin_id": res.twin_id,
                "order": res.order,
                "slor": {c.key: res.slor_by_condition[c] for c in CONDITIONS},
                "delta_ltaln": res.delta_ltaln,
                "delta_and": res.delta_and,
                "correct": res.correct,
                "pair_correct": res.pair_correct,
            }, sort_keys=True) + "\n")

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> "SuiteResult":
        if hasattr(source, "read"):
            lines = [l for l in (raw.strip() for raw in source) if l]
        else:
            with open(source, encoding="utf-8") as f:
                lines = [l for l in (raw.strip() for raw in f) if l]
        if not lines:
            raise ValueError("empty result file")
        header = json.loads(lines[0])
        if header.get("format") != RESULT_FORMAT:
            raise ValueError("not a suite result file")
        item_results = []
        for line in lines[1:]:
            data = json.loads(line)
            item_results.append(ItemResult(
                item_id=data["item_id"],
                twin_id=data["twin_id"],
                order=data["order"],
                slor_by_condition={
                    ConditionLabel.from_key(key): value
                    for key, value in data["slor"].items()
                },
                delta_ltaln=data["delta_ltaln"],
                delta_and=data["delta_and"],
                correct=data["correct"],
                pair_correct=data["pair_correct"],
            ))
        return cls(
            property=header["property"],
            k=header["k"],
            k_twin_pairs=header["k_twin_pairs"],
            accuracy=header["accuracy"],
            strict=header["strict"],
            item_results=tuple(item_results),
            model_fingerprint=header["model_fingerprint"],
            unigram_fingerprint=header["unigram_fingerprint"],
            lexicon_fingerprint=header["lexicon_fingerprint"],
            scenario=header["scenario"],
            seed=header["seed"],
        )


def evaluate_suite(suite: Suite, scores: Mapping[str, ItemScores], *,
                   strict: bool = False, model_fingerprint: str = "",
                   unigram_fingerprint: str = "", scenario: str = "",
                   seed: str = "") -> SuiteResult:
    """Score a suite: a twin pair is correct only when both orders are correct.

    Accuracy is the fraction of correct twin pairs. Raises when any item
    lacks a score or a twin link is broken, naming the offender.
    """
    index = {item.item_id: item for item in suite.items}
    for item in suite.items:
        if item.item_id not in scores:
            raise ScoringError(f"missing score for item {item.item_id}")
        twin = index.get(item.twin_id)
        if twin is None:
            raise ScoringError(
                f"item {item.item_id} names twin {item.twin_id}, which is not in the suite")
        if twin.twin_id != item.item_id:
            raise ScoringError(f"twin link of item {item.item_id} is not mutual")

    correct_by_id = {
        item_id: item_correct(s.delta_ltaln, s.delta_and, strict=strict)
        for item_id, s in ((i.item_id, scores[i.item_id]) for i in suite.items)
    }
    pairs_total = 0
    pairs_correct = 0
    pair_flag: dict[str, bool] = {}
    for item in suite.items:
        if item.item_id > item.twin_id:
            continue  # count each unordered pair once
        joint = correct_by_id[item.item_id] and correct_by_id[item.twin_id]
        pair_flag[item.item_id] = joint
        pair_flag[item.twin_id] = joint
        pairs_total += 1
        pairs_correct += joint
    if pairs_total == 0:
        raise ScoringError("suite has no twin pairs to evaluate")

    item_results = tuple(
        ItemResult(
            item_id=item.item_id,
            twin_id=item.twin_id,
            order=item.order,
            slor_by_condition=dict(scores[item.item_id].slor_by_condition),
            delta_ltaln=scores[item.item_id].delta_ltaln,
            delta_and=scores[item.item_id].delta_and,
            correct=correct_by_id[item.item_id],
            pair_correct=pair_flag[item.item_id],
        )
        for item in suite.items
    )
    return SuiteResult(
        property=suite.property,
        k=suite.k,
        k_twin_pairs=pairs_total,
        accuracy=pairs_correct / pairs_total,
        strict=strict,
        item_results=item_results,
        model_fingerprint=model_fingerprint,
        unigram_fingerprint=unigram_fingerprint,
        lexicon_fingerprint=suite.lexicon_fingerprint,
        scenario=scenario,
        seed=seed,
    )
