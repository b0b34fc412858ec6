"""Lexicon configuration: the word inventory that drives suite generation.

A lexicon supplies subject NPs, neutral modifiers (color terms), negatable
transitive predicates tagged with a scalar domain, the object nouns each
predicate combines with, and one comparative phrase per scalar domain.
Two reconstructed default lexicons ship with the package (see
``bundled_lexicon``); their word lists are an implementer reconstruction,
sized to reproduce the published suite counts, not an attested inventory.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any


class LexiconError(ValueError):
    """A lexicon file is missing a required slot or violates an invariant."""


@dataclass(frozen=True)
class Noun:
    """An object noun; ``plural`` selects 'are' over 'is' in follow-ups."""

    text: str
    plural: bool = False

    @property
    def copula(self) -> str:
        return "are" if self.plural else "is"


@dataclass(frozen=True)
class Predicate:
    """A negatable transitive predicate frame with its scalar domain."""

    verb: str
    domain: str
    nouns: tuple[Noun, ...]


@dataclass(frozen=True)
class LexiconConfig:
    subjects: tuple[str, ...]
    modifiers: tuple[str, ...]
    predicates: tuple[Predicate, ...]
    comparatives: dict[str, str] = field(default_factory=dict)
    gap_subject: str = "you"
    negative_aux: str = "couldn't"
    positive_aux: str = "could"
    negation_tokens: tuple[str, ...] = ("couldn't", "not", "cannot")

    def validate(self) -> None:
        if not self.subjects:
            raise LexiconError("lexicon missing required slot 'subjects'")
        if len(self.modifiers) < 2:
            raise LexiconError("lexicon slot 'modifiers' needs at least two entries")
        if len(set(self.modifiers)) != len(self.modifiers):
            raise LexiconError("lexicon slot 'modifiers' contains duplicates")
        if not self.predicates:
            raise LexiconError("lexicon missing required slot 'predicates'")
        for text in self._all_strings():
            if not text:
                raise LexiconError("lexicon contains an empty string")
            if "\n" in text or "\r" in text:
                raise LexiconError(f"lexicon string contains a newline: {text!r}")
        for pred in self.predicates:
            if not pred.nouns:
                raise LexiconError(f"predicate {pred.verb!r} missing required slot 'nouns'")
            # every scalar domain must map to exactly one comparative phrase
            if pred.domain not in self.comparatives:
                raise LexiconError(
                    f"lexicon missing required slot 'comparatives[{pred.domain}]' "
                    f"(needed by predicate {pred.verb!r})"
                )

    def _all_strings(self):
        yield from self.subjects
        yield from self.modifiers
        yield self.gap_subject
        yield self.negative_aux
        yield self.positive_aux
        yield from self.negation_tokens
        for domain, phrase in self.comparatives.items():
            yield domain
            yield phrase
        for pred in self.predicates:
            yield pred.verb
            yield pred.domain
            for noun in pred.nouns:
                yield noun.text

    def to_dict(self) -> dict[str, Any]:
        return {
            "subjects": list(self.subjects),
            "modifiers": list(self.modifiers),
            "gap_subject": self.gap_subject,
            "negative_aux": self.negative_aux,
            "positive_aux": self.positive_aux,
            "negation_tokens": list(self.negation_tokens),
            "comparatives": dict(sorted(self.comparatives.items())),
            "predicates": [
                {
                    "verb": p.verb,
                    "domain": p.domain,
                    "nouns": [
                        {"text": n.text, "plural": True} if n.plural else n.text
                        for n in p.nouns
                    ],
                }
                for p in self.predicates
            ],
        }

    def fingerprint(self) -> str:
        """Hash of the resolved configuration; identical lexicons hash identically."""
        payload = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=True,
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _parse_noun(entry: Any) -> Noun:
    if isinstance(entry, str):
        return Noun(entry)
    if isinstance(entry, dict) and "text" in entry:
        return Noun(str(entry["text"]), bool(entry.get("plural", False)))
    raise LexiconError(f"bad noun entry: {entry!r}")


def lexicon_from_dict(data: dict[str, Any]) -> LexiconConfig:
    """Build and validate a LexiconConfig from parsed JSON."""
    for slot in ("subjects", "modifiers", "predicates", "comparatives"):
        if slot not in data:
            raise LexiconError(f"lexicon missing required slot '{slot}'")
    shared_nouns = [_parse_noun(n) for n in data.get("nouns", [])]
    predicates = []
    for entry in data["predicates"]:
        if "verb" not in entry or "domain" not in entry:
            raise LexiconError(f"predicate entry missing 'verb' or 'domain': {entry!r}")
        nouns = [_parse_noun(n) for n in entry["nouns"]] if "nouns" in entry else shared_nouns
        predicates.append(Predicate(str(entry["verb"]), str(entry["domain"]), tuple(nouns)))
    config = LexiconConfig(
        subjects=tuple(str(s) for s in data["subjects"]),
        modifiers=tuple(str(m) for m in data["modifiers"]),
        predicates=tuple(predicates),
        comparatives={str(k): str(v) for k, v in data["comparatives"].items()},
        gap_subject=str(data.get("gap_subject", "you")),
        negative_aux=str(data.get("negative_aux", "couldn't")),
        positive_aux=str(data.get("positive_aux", "could")),
        negation_tokens=tuple(str(t) for t in data.get("negation_tokens",
                                                       ("couldn't", "not", "cannot"))),
    )
    config.validate()
    return config


def load_lexicon(path: str | Path) -> LexiconConfig:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"lexicon file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise LexiconError(f"lexicon file {path} must contain a JSON object")
    return lexicon_from_dict(data)


def bundled_lexicon(kind: str) -> LexiconConfig:
    """Load one of the packaged default lexicons: 'formal' or 'semantic'."""
    if kind not in ("formal", "semantic"):
        raise LexiconError(f"no bundled lexicon named {kind!r}")
    ref = resources.files("letalone.data").joinpath(f"{kind}_lexicon.json")
    with ref.open(encoding="utf-8") as f:
        return lexicon_from_dict(json.load(f))
