"""Templatic generation of condition-crossed minimal-pair suites.

Every item crosses a grammatical manipulation (+/-m) with the choice of
conjunction (+l = "let alone", -l = "and"), yielding four sentences built
from one frame: SUBJ couldn't PRED the MOD1 NOUN <conj> the MOD2 NOUN.
Formal suites manipulate the frame itself; the semantic suite keeps the
frame as context and manipulates a comparative follow-up sentence.
Each item is emitted in both modifier orders; the two orders are twins.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .lexicon import LexiconConfig, LexiconError, Noun, Predicate

GENERATOR_VERSION = "1.0"

FORMAL_PROPERTIES = ("conj_clause", "conj_vp", "conj_gap", "cleft", "npi")
SEMANTIC_PROPERTY = "scalar_semantics"
ALL_PROPERTIES = FORMAL_PROPERTIES + (SEMANTIC_PROPERTY,)

LET_ALONE = "let alone"
AND = "and"

SUITE_FORMAT = "letalone-suite"
SUITE_FORMAT_VERSION = 1


class SuiteFormatError(ValueError):
    """A suite file is malformed or violates a suite invariant."""


@dataclass(frozen=True, order=True)
class ConditionLabel:
    """One cell of the 2x2 design: manip=True is +m, ltaln=True is +l."""

    manip: bool
    ltaln: bool

    @property
    def key(self) -> str:
        return ("+" if self.manip else "-") + "m" + ("+" if self.ltaln else "-") + "l"

    @classmethod
    def from_key(cls, key: str) -> "ConditionLabel":
        if key not in _KEY_TO_CONDITION:
            raise SuiteFormatError(f"unknown condition key {key!r}")
        return _KEY_TO_CONDITION[key]


# Fixed cell order used in files and reports.
CONDITIONS = (
    ConditionLabel(manip=True, ltaln=True),
    ConditionLabel(manip=False, ltaln=True),
    ConditionLabel(manip=True, ltaln=False),
    ConditionLabel(manip=False, ltaln=False),
)
_KEY_TO_CONDITION = {c.key: c for c in CONDITIONS}


@dataclass(frozen=True)
class TestItem:
    item_id: str
    property: str
    sentences: dict[ConditionLabel, str]
    context_sentences: dict[ConditionLabel, str]
    order: str  # "canonical" | "swapped"
    twin_id: str

    def full_text(self, condition: ConditionLabel) -> str:
        """Context and target joined as the scorer sees them."""
        context = self.context_sentences[condition]
        sentence = self.sentences[condition]
        return f"{context} {sentence}" if context else sentence


@dataclass(frozen=True)
class Suite:
    property: str
    items: tuple[TestItem, ...]
    lexicon_fingerprint: str
    generator_version: str = GENERATOR_VERSION

    @property
    def k(self) -> int:
        """Item count, counting both modifier orders separately."""
        return len(self.items)

    @property
    def k_twin_pairs(self) -> int:
        """Twin-pair count: the convention under which published sizes are quoted."""
        return len(self.items) // 2

    def item_by_id(self, item_id: str) -> TestItem:
        try:
            return self._index()[item_id]
        except KeyError:
            raise KeyError(f"suite has no item {item_id!r}") from None

    def _index(self) -> dict[str, TestItem]:
        cached = getattr(self, "_id_index", None)
        if cached is None:
            cached = {item.item_id: item for item in self.items}
            object.__setattr__(self, "_id_index", cached)
        return cached

    def validate(self) -> None:
        index = self._index()
        if len(index) != len(self.items):
            raise SuiteFormatError("duplicate item ids in suite")
        for item in self.items:
            if item.property != self.property:
                raise SuiteFormatError(
                    f"item {item.item_id} has property {item.property!r}, "
                    f"suite is {self.property!r}")
            if set(item.sentences) != set(CONDITIONS) or set(item.context_sentences) != set(CONDITIONS):
                raise SuiteFormatError(f"item {item.item_id} does not cover all four conditions")
            twin = index.get(item.twin_id)
            if twin is None:
                raise SuiteFormatError(f"item {item.item_id} has no twin {item.twin_id} in suite")
            if twin.twin_id != item.item_id:
                raise SuiteFormatError(f"twin link of {item.item_id} is not mutual")
            if item.twin_id == item.item_id:
                raise SuiteFormatError(f"item {item.item_id} is its own twin")
            for cond in CONDITIONS:
                context = item.context_sentences[cond]
                if self.property == SEMANTIC_PROPERTY:
                    if not context:
                        raise SuiteFormatError(f"semantic item {item.item_id} has empty context")
                elif context:
                    raise SuiteFormatError(f"formal item {item.item_id} has nonempty context")
                full = item.full_text(cond)
                occurrences = full.count(LET_ALONE)
                if cond.ltaln and occurrences != 1:
                    raise SuiteFormatError(
                        f"+l condition of {item.item_id} contains 'let alone' {occurrences} times")
                if not cond.ltaln and occurrences != 0:
                    raise SuiteFormatError(f"-l condition of {item.item_id} contains 'let alone'")


def _focus_np(modifier: str, noun: Noun) -> str:
    return f"the {modifier} {noun.text}"


def _formal_target(property: str, manipulated: bool, conj: str, subject: str,
                   pred: Predicate, noun: Noun, mod1: str, mod2: str,
                   lexicon: LexiconConfig) -> str:
    np1 = _focus_np(mod1, noun)
    np2 = _focus_np(mod2, noun)
    neg = lexicon.negative_aux
    verb = pred.verb
    if not manipulated:
        return f"{subject} {neg} {verb} {np1} {conj} {np2}."
    if property == "conj_clause":
        return f"{subject} {neg} {verb} {np1} {conj} {subject} {neg} {verb} {np2}."
    if property == "conj_vp":
        return f"{subject} {neg} {verb} {np1} {conj} {verb} {np2}."
    if property == "conj_gap":
        return f"{subject} {neg} {verb} {np1} {conj} {lexicon.gap_subject} {np2}."
    if property == "cleft":
        return f"It is {np1} {conj} {np2} that {subject} {neg} {verb}."
    if property == "npi":
        return f"{subject} {lexicon.positive_aux} {verb} {np1} {conj} {np2}."
    raise ValueError(f"unknown formal property {property!r}")


def _frames(lexicon: LexiconConfig):
    """Deterministic iteration over (indices, slot values) of the template cross."""
    mods = lexicon.modifiers
    for si, subject in enumerate(lexicon.subjects):
        for pi, pred in enumerate(lexicon.predicates):
            for ni, noun in enumerate(pred.nouns):
                for a in range(len(mods)):
                    for b in range(len(mods)):
                        if a == b:
                            continue
                        yield si, pi, ni, a, b, subject, pred, noun, mods[a], mods[b]


def _item_id(property: str, si: int, pi: int, ni: int, a: int, b: int) -> str:
    return f"{property}.s{si}.p{pi}.n{ni}.m{a}x{b}"


def generate_formal_suite(lexicon: LexiconConfig, property: str) -> Suite:
    """Generate one formal suite: k = P*S*N*M*(M-1) items, both orders linked as twins."""
    if property not in FORMAL_PROPERTIES:
        raise ValueError(
            f"unknown formal property {property!r}; expected one of {FORMAL_PROPERTIES}")
    lexicon.validate()
    items = []
    for si, pi, ni, a, b, subject, pred, noun, mod1, mod2 in _frames(lexicon):
        sentences = {}
        contexts = {}
        for cond in CONDITIONS:
            conj = LET_ALONE if cond.ltaln else AND
            sentences[cond] = _formal_target(property, cond.manip, conj, subject,
                                             pred, noun, mod1, mod2, lexicon)
            contexts[cond] = ""
        items.append(TestItem(
            item_id=_item_id(property, si, pi, ni, a, b),
            property=property,
            sentences=sentences,
            context_sentences=contexts,
            order="canonical" if a < b else "swapped",
            twin_id=_item_id(property, si, pi, ni, b, a),
        ))
    return Suite(property=property, items=tuple(items),
                 lexicon_fingerprint=lexicon.fingerprint())


def generate_semantic_suite(lexicon: LexiconConfig) -> Suite:
    """Generate the scalar-semantics suite.

    The context is the base frame (with "let alone" in +l cells, "and" in
    -l cells); the target is a comparative follow-up. The unmanipulated
    follow-up puts the second focus NP higher on the scale; +m swaps the
    two NPs. The same order rule labels the -l cells, where neither
    follow-up contradicts the context.
    """
    lexicon.validate()
    items = []
    for si, pi, ni, a, b, subject, pred, noun, mod1, mod2 in _frames(lexicon):
        comparative = lexicon.comparatives[pred.domain]
        np1 = _focus_np(mod1, noun)
        np2 = _focus_np(mod2, noun)
        neg = lexicon.negative_aux
        sentences = {}
        contexts = {}
        for cond in CONDITIONS:
            conj = LET_ALONE if cond.ltaln else AND
            contexts[cond] = f"{subject} {neg} {pred.verb} {np1} {conj} {np2}."
            high, low = (mod1, mod2) if cond.manip else (mod2, mod1)
            sentences[cond] = (
                f"The {high} {noun.text} {noun.copula} {comparative} the {low} {noun.text}."
            )
        items.append(TestItem(
            item_id=_item_id(SEMANTIC_PROPERTY, si, pi, ni, a, b),
            property=SEMANTIC_PROPERTY,
            sentences=sentences,
            context_sentences=contexts,
            order="canonical" if a < b else "swapped",
            twin_id=_item_id(SEMANTIC_PROPERTY, si, pi, ni, b, a),
        ))
    return Suite(property=SEMANTIC_PROPERTY, items=tuple(items),
                 lexicon_fingerprint=lexicon.fingerprint())


def generate_suite(lexicon: LexiconConfig, property: str) -> Suite:
    if property == SEMANTIC_PROPERTY:
        return generate_semantic_suite(lexicon)
    return generate_formal_suite(lexicon, property)


def expected_item_count(lexicon: LexiconConfig) -> int:
    """The combinatorial size of the template cross, counting both orders."""
    m = len(lexicon.modifiers)
    slots = sum(len(p.nouns) for p in lexicon.predicates)
    return len(lexicon.subjects) * slots * m * (m - 1)


def write_suite(suite: Suite, destination: str | Path | IO[str]) -> None:
    """Write a suite as line-delimited JSON: one header record, one record per item."""
    if hasattr(destination, "write"):
        _write_suite_records(suite, destination)
    else:
        with open(destination, "w", encoding="utf-8") as f:
            _write_suite_records(suite, f)


def _write_suite_records(suite: Suite, f: IO[str]) -> None:
    header = {
        "record": "suite_header",
        "format": SUITE_FORMAT,
        "format_version": SUITE_FORMAT_VERSION,
        "property": suite.property,
        "k": suite.k,
        "k_twin_pairs": suite.k_twin_pairs,
        "lexicon_fingerprint": suite.lexicon_fingerprint,
        "generator_version": suite.generator_version,
    }
    f.write(json.dumps(header, sort_keys=True) + "\n")
    for item in suite.items:
        record = {
            "record": "item",
            "item_id": item.item_id,
            "twin_id": item.twin_id,
            "order": item.order,
            "conditions": {
                cond.key: {
                    "context": item.context_sentences[cond],
                    "sentence": item.sentences[cond],
                }
                for cond in CONDITIONS
            },
        }
        f.write(json.dumps(record, sort_keys=True) + "\n")


def read_suite(source: str | Path | IO[str]) -> Suite:
    """Read and validate a suite file written by ``write_suite``."""
    if hasattr(source, "read"):
        return _read_suite_records(source)
    with open(source, encoding="utf-8") as f:
        return _read_suite_records(f)


def _read_suite_records(f: IO[str]) -> Suite:
    lines = [line for line in (raw.strip() for raw in f) if line]
    if not lines:
        raise SuiteFormatError("empty suite file")
    header = _parse_record(lines[0], 1)
    if header.get("record") != "suite_header" or header.get("format") != SUITE_FORMAT:
        raise SuiteFormatError("missing suite header record")
    items = []
    for lineno, line in enumerate(lines[1:], start=2):
        record = _parse_record(line, lineno)
        if record.get("record") != "item":
            raise SuiteFormatError(f"line {lineno}: expected an item record")
        try:
            conditions = record["conditions"]
            sentences = {ConditionLabel.from_key(k): v["sentence"] for k, v in conditions.items()}
            contexts = {ConditionLabel.from_key(k): v["context"] for k, v in conditions.items()}
            items.append(TestItem(
                item_id=record["item_id"],
                property=header["property"],
                sentences=sentences,
                context_sentences=contexts,
                order=record["order"],
                twin_id=record["twin_id"],
            ))
        except (KeyError, TypeError) as exc:
            raise SuiteFormatError(f"line {lineno}: malformed item record ({exc})") from exc
    suite = Suite(
        property=header["property"],
        items=tuple(items),
        lexicon_fingerprint=header["lexicon_fingerprint"],
        generator_version=str(header.get("generator_version", "")),
    )
    if suite.k != header["k"]:
        raise SuiteFormatError(f"header says k={header['k']} but file has {suite.k} items")
    suite.validate()
    return suite


def _parse_record(line: str, lineno: int) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SuiteFormatError(f"line {lineno}: not valid JSON ({exc})") from exc
    if not isinstance(record, dict):
        raise SuiteFormatError(f"line {lineno}: record is not an object")
    return record
