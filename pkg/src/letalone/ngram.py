"""Self-contained backoff n-gram scorer.

Absolute discounting with interpolation down to a maximum-likelihood
unigram base, so every hand-worked example is checkable on paper. At
order 1 the model is exactly the unsmoothed unigram distribution. Exists
so the whole pipeline runs and is testable without a neural scorer.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import IO, Iterable

from .unigram import tokenize

BOS = "<s>"  # internal sentence-start padding; never scored, never emitted

MODEL_FORMAT = "letalone-ngram"
FORMAT_VERSION = 1


class NGramModel:
    def __init__(self, order: int, discount: float,
                 context_counts: dict[tuple[str, ...], dict[str, int]]):
        if order < 1:
            raise ValueError("order must be >= 1")
        if order > 1 and not 0 < discount < 1:
            raise ValueError("discount must lie strictly between 0 and 1")
        self.order = order
        self.discount = discount
        self.context_counts = context_counts
        unigrams = context_counts.get((), {})
        self.unigram_total = sum(unigrams.values())
        if self.unigram_total == 0:
            raise ValueError("empty corpus: model has no unigram counts")
        self._context_totals = {
            ctx: sum(dist.values()) for ctx, dist in context_counts.items()
        }

    @property
    def vocab(self) -> set[str]:
        return set(self.context_counts[()])

    def _oov_floor(self) -> float:
        return 1.0 / (self.unigram_total + len(self.context_counts[()]))

    def prob(self, token: str, context: tuple[str, ...] = ()) -> float:
        """p(token | context) with absolute-discounting backoff.

        Unknown tokens get a fixed positive floor outside the vocabulary,
        so the per-context distributions over the vocabulary itself still
        sum to one.
        """
        unigrams = self.context_counts[()]
        if token not in unigrams:
            return self._oov_floor()
        context = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        return self._prob_backoff(token, context)

    def _prob_backoff(self, token: str, context: tuple[str, ...]) -> float:
        if not context:
            count = self.context_counts[()].get(token, 0)
            return count / self.unigram_total
        dist = self.context_counts.get(context)
        if not dist:
            return self._prob_backoff(token, context[1:])
        total = self._context_totals[context]
        discounted = max(dist.get(token, 0) - self.discount, 0.0) / total
        reserved = self.discount * len(dist) / total
        return discounted + reserved * self._prob_backoff(token, context[1:])

    def logprob(self, token: str, context: tuple[str, ...] = ()) -> float:
        unigrams = self.context_counts[()]
        if self.order == 1 or not context:
            # same arithmetic as UnigramModel.logprob for observed tokens
            count = unigrams.get(token, 0)
            if count > 0:
                return math.log(count / self.unigram_total)
            return math.log(self._oov_floor())
        return math.log(self.prob(token, context))

    def score(self, context_tokens: Iterable[str], target_tokens: Iterable[str]) -> list[float]:
        """Per-token natural-log conditionals for the target via the chain rule.

        The context conditions the target but is not scored itself; with an
        empty context the result is the unconditional sentence probability.
        """
        target = list(target_tokens)
        if not target:
            raise ValueError("cannot score an empty token sequence")
        history = [BOS] * (self.order - 1) + list(context_tokens)
        logprobs = []
        for token in target:
            context = tuple(history[-(self.order - 1):]) if self.order > 1 else ()
            logprobs.append(self.logprob(token, context))
            history.append(token)
        return logprobs

    def fingerprint(self) -> str:
        payload = json.dumps(self._to_dict(), sort_keys=True, ensure_ascii=True,
                             separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def _to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "format_version": FORMAT_VERSION,
            "order": self.order,
            "discount": self.discount,
            "contexts": {
                " ".join(ctx): dict(sorted(dist.items()))
                for ctx, dist in sorted(self.context_counts.items())
            },
        }

    def save(self, destination: str | Path | IO[str]) -> None:
        payload = json.dumps(self._to_dict(), sort_keys=True, indent=0)
        if hasattr(destination, "write"):
            destination.write(payload + "\n")
        else:
            with open(destination, "w", encoding="utf-8") as f:
                f.write(payload + "\n")

    @classmethod
    def load(cls, source: str | Path | IO[str]) -> "NGramModel":
        if hasattr(source, "read"):
            data = json.load(source)
        else:
            with open(source, encoding="utf-8") as f:
                data = json.load(f)
        if data.get("format") != MODEL_FORMAT:
            raise ValueError("not an n-gram model file")
        contexts = {
            tuple(key.split(" ")) if key else (): dict(dist)
            for key, dist in data["contexts"].items()
        }
        return cls(data["order"], data["discount"], contexts)


def train_ngram(corpus: str | Iterable[str], order: int, discount: float = 0.75, *,
                lowercase: bool = False) -> NGramModel:
    """Train on a line-per-sentence stream; deterministic for a fixed input."""
    if order < 1:
        raise ValueError("order must be >= 1")
    lines = corpus.splitlines() if isinstance(corpus, str) else corpus
    context_counts: dict[tuple[str, ...], dict[str, int]] = {(): {}}
    saw_tokens = False
    for line in lines:
        tokens = tokenize(line, lowercase=lowercase)
        if not tokens:
            continue
        saw_tokens = True
        for token in tokens:
            if " " in token:
                raise ValueError(f"token contains a space: {token!r}")
        padded = [BOS] * (order - 1) + tokens
        for i, token in enumerate(tokens):
            for k in range(order):
                # context of length k ending just before this token
                ctx = tuple(padded[i + (order - 1) - k: i + (order - 1)])
                dist = context_counts.setdefault(ctx, {})
                dist[token] = dist.get(token, 0) + 1
    if not saw_tokens:
        raise ValueError("empty corpus: nothing to train on")
    return NGramModel(order, discount, context_counts)
