"""Unigram distribution over the scoring vocabulary.

Counts are stored exactly as observed; smoothing is applied at query time
so the same model can be re-queried under a different scheme. All log
probabilities are natural logs.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable


class OOVError(KeyError):
    """Raised on an out-of-vocabulary query when smoothing cannot cover it."""


class TokenizerError(ValueError):
    """Unknown tokenizer spec, or input incompatible with the declared tokenizer."""


MODEL_FORMAT = "letalone-unigram"
FORMAT_VERSION = 1

WHITESPACE = "whitespace"
PRETOKENIZED = "pretokenized"


@dataclass(frozen=True)
class Smoothing:
    """Query-time smoothing: 'none', 'add_k' (param=k), or 'floor' (param=epsilon).

    A floor with param=None resolves to 1/(total + |vocab|), which keeps every
    observed count/total untouched while giving OOV queries a positive mass.
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind not in ("none", "add_k", "floor"):
            raise ValueError(f"unknown smoothing kind {self.kind!r}")
        if self.kind == "add_k" and (self.param is None or self.param <= 0):
            raise ValueError("add_k smoothing requires a positive k")
        if self.kind == "floor" and self.param is not None and self.param <= 0:
            raise ValueError("floor smoothing requires a positive epsilon")

    @classmethod
    def none(cls) -> "Smoothing":
        return cls("none")

    @classmethod
    def add_k(cls, k: float) -> "Smoothing":
        return cls("add_k", k)

    @classmethod
    def floor(cls, epsilon: float | None = None) -> "Smoothing":
        return cls("floor", epsilon)


DEFAULT_SMOOTHING = Smoothing.floor()


class UnigramModel:
    """Token -> probability table with exact counts and query-time smoothing."""

    def __init__(self, counts: dict[str, int], smoothing: Smoothing,
                 tokenizer_spec: str, corpus_fingerprint: str):
        if not counts:
            raise ValueError("empty corpus: a unigram model needs at least one token")
        total = sum(counts.values())
        if total <= 0:
            raise ValueError("empty corpus: total token count is zero")
        for token, count in counts.items():
            if count < 0:
                raise ValueError(f"negative count for token {token!r}")
            if "\t" in token or "\n" in token or token == "":
                raise TokenizerError(f"token not representable in model file: {token!r}")
        self.counts = counts
        self.total = total
        self.smoothing = smoothing
        self.tokenizer_spec = tokenizer_spec
        self.corpus_fingerprint = corpus_fingerprint

    @property
    def vocab(self) -> set[str]:
        return set(self.counts)

    def _floor(self) -> float:
        if self.smoothing.param is not None:
            return self.smoothing.param
        return 1.0 / (self.total + len(self.counts))

    def prob(self, token: str) -> float:
        count = self.counts.get(token)
        kind = self.smoothing.kind
        if kind == "none":
            if count is None or count == 0:
                raise OOVError(f"token {token!r} not in vocabulary and smoothing is 'none'")
            return count / self.total
        if kind == "add_k":
            k = self.smoothing.param
            return ((count or 0) + k) / (self.total + k * len(self.counts))
        eps = self._floor()
        if count is None or count == 0:
            return eps
        return max(count / self.total, eps)

    def logprob(self, token: str) -> float:
        count = self.counts.get(token)
        if self.smoothing.kind == "none":
            if count is None or count == 0:
                raise OOVError(f"token {token!r} not in vocabulary and smoothing is 'none'")
            return math.log(count / self.total)
        if self.smoothing.kind == "add_k":
            return math.log(self.prob(token))
        # floor: keep the unsmoothed arithmetic for observed tokens above the floor
        eps = self._floor()
        if count is None or count == 0 or count / self.total < eps:
            return math.log(eps)
        return math.log(count / self.total)

    def fingerprint(self) -> str:
        payload = json.dumps(
            {
                "counts": dict(sorted(self.counts.items())),
                "smoothing": [self.smoothing.kind, self.smoothing.param],
                "tokenizer_spec": self.tokenizer_spec,
                "corpus_fingerprint": self.corpus_fingerprint,
            },
            sort_keys=True, ensure_ascii=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def save(self, destination: str | Path | IO[str]) -> None:
        """Text format: tab-separated header lines, then sorted token/count pairs."""
        if hasattr(destination, "write"):
            self._write(destination)
        else:
            with open(destination, "w", encoding="utf-8") as f:
                self._write(f)

    def _write(self, f: IO[str]) -> None:
        param = "" if self.smoothing.param is None else repr(self.smoothing.param)
        f.write(f"#format\t{MODEL_FORMAT}\t{FORMAT_VERSION}\n")
        f.write(f"#tokenizer\t{self.tokenizer_spec}\n")
        f.write(f"#smoothing\t{self.smoothing.kind}\t{param}\n")
        f.write(f"#total\t{self.total}\n")
        f.write(f"#corpus_fingerprint\t{self.corpus_fingerprint}\n")
        for token in sorted(self.counts):
            f.write(f"{token}\t{self.counts[token]}\n")

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> "UnigramModel":
        if hasattr(source, "read"):
            return cls._read(source)
        with open(source, encoding="utf-8") as f:
            return cls._read(f)

    @classmethod
    def _read(cls, f: IO[str]) -> "UnigramModel":
        header: dict[str, list[str]] = {}
        counts: dict[str, int] = {}
        for raw in f:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                fields = line[1:].split("\t")
                header[fields[0]] = fields[1:]
                continue
            token, _, count = line.rpartition("\t")
            counts[token] = int(count)
        if header.get("format", [""])[0] != MODEL_FORMAT:
            raise ValueError("not a unigram model file")
        kind, param_text = header["smoothing"][0], header["smoothing"][1]
        smoothing = Smoothing(kind, float(param_text) if param_text else None)
        model = cls(counts, smoothing, header["tokenizer"][0], header["corpus_fingerprint"][0])
        if model.total != int(header["total"][0]):
            raise ValueError("unigram model file is inconsistent: total does not match counts")
        return model


def _iter_chunks(corpus: str | Iterable[str]) -> Iterable[str]:
    if isinstance(corpus, str):
        yield corpus
    else:
        yield from corpus


def tokenize(text: str, *, lowercase: bool = False) -> list[str]:
    """Whitespace-word tokenization used throughout the reference pipeline."""
    if lowercase:
        text = text.lower()
    return text.split()


def build_unigram(corpus: str | Iterable[str], tokenizer: str = WHITESPACE, *,
                  lowercase: bool = False, vocab: Iterable[str] | None = None,
                  smoothing: Smoothing = DEFAULT_SMOOTHING) -> UnigramModel:
    """Count exact token frequencies over a corpus stream.

    ``corpus`` may be one string or any iterable of text chunks; chunk
    boundaries are invisible (a token split across two chunks is counted
    once). With ``tokenizer="pretokenized"`` the text must already be
    space-separated tokens drawn from ``vocab``, which then fixes the
    vocabulary; unseen vocab entries get count 0.
    """
    if tokenizer not in (WHITESPACE, PRETOKENIZED):
        raise TokenizerError(f"unknown tokenizer spec {tokenizer!r}")
    if tokenizer == PRETOKENIZED and vocab is None:
        raise TokenizerError("pretokenized mode requires an imported vocabulary")
    vocab_set = set(vocab) if vocab is not None else None

    counts: dict[str, int] = {}
    if vocab_set is not None:
        for token in vocab_set:
            counts[token] = 0
    digest = hashlib.sha256()
    carry = ""
    saw_text = False
    for chunk in _iter_chunks(corpus):
        saw_text = True
        digest.update(chunk.encode("utf-8"))
        text = carry + chunk
        parts = text.split()
        carry = parts.pop() if parts and text and not text[-1].isspace() else ""
        for token in parts:
            _count_token(counts, token, tokenizer, vocab_set, lowercase)
    if carry:
        _count_token(counts, carry, tokenizer, vocab_set, lowercase)
    if not saw_text or sum(counts.values()) == 0:
        raise ValueError("empty corpus: no tokens to count")

    spec = tokenizer
    if lowercase:
        spec += "+lowercase"
    return UnigramModel(counts, smoothing, spec, digest.hexdigest())


def _count_token(counts: dict[str, int], token: str, tokenizer: str,
                 vocab_set: set[str] | None, lowercase: bool) -> None:
    if lowercase:
        token = token.lower()
    if tokenizer == PRETOKENIZED and token not in vocab_set:
        raise TokenizerError(
            f"corpus token {token!r} is not in the imported vocabulary")
    counts[token] = counts.get(token, 0) + 1
