"""Token-logprob exchange format.

Line-delimited JSON shared by every scorer (the built-in n-gram scorer and
any external adapter). One header record, then one record per (item,
condition) with the target-sentence token strings and their per-token
natural-log probabilities. Context tokens are conditioned on by the scorer
but never appear in records. Floats are serialized with Python's shortest
round-trip repr, so reading a file back reproduces every value bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from .templates import CONDITIONS, ConditionLabel, Suite

EXCHANGE_FORMAT = "letalone-token-logprobs"
FORMAT_VERSION = 1


class ExchangeValidationError(ValueError):
    """An exchange file does not satisfy the schema for its suite."""


@dataclass(frozen=True)
class TokenRecord:
    item_id: str
    condition: ConditionLabel
    tokens: tuple[str, ...]
    logprobs: tuple[float, ...]
    model_fingerprint: str


@dataclass
class ExchangeFile:
    model_fingerprint: str
    tokenizer_spec: str
    records: dict[tuple[str, str], TokenRecord] = field(default_factory=dict)

    def record_for(self, item_id: str, condition: ConditionLabel) -> TokenRecord:
        return self.records[(item_id, condition.key)]


def write_exchange(destination: str | Path | IO[str], records: Iterable[TokenRecord], *,
                   model_fingerprint: str, tokenizer_spec: str) -> None:
    if hasattr(destination, "write"):
        _write(destination, records, model_fingerprint, tokenizer_spec)
    else:
        with open(destination, "w", encoding="utf-8") as f:
            _write(f, records, model_fingerprint, tokenizer_spec)


def _write(f: IO[str], records: Iterable[TokenRecord],
           model_fingerprint: str, tokenizer_spec: str) -> None:
    header = {
        "record": "exchange_header",
        "format": EXCHANGE_FORMAT,
        "format_version": FORMAT_VERSION,
        "model_fingerprint": model_fingerprint,
        "tokenizer_spec": tokenizer_spec,
    }
    f.write(json.dumps(header, sort_keys=True) + "\n")
    for record in records:
        f.write(json.dumps({
            "record": "tokens",
            "item_id": record.item_id,
            "condition": record.condition.key,
            "tokens": list(record.tokens),
            "logprobs": list(record.logprobs),
            "model_fingerprint": record.model_fingerprint,
        }, sort_keys=True) + "\n")


def read_exchange(source: str | Path | IO[str]) -> ExchangeFile:
    if hasattr(source, "read"):
        return _read(source)
    with open(source, encoding="utf-8") as f:
        return _read(f)


def _read(f: IO[str]) -> ExchangeFile:
    lines = [line for line in (raw.strip() for raw in f) if line]
    if not lines:
        raise ExchangeValidationError("empty exchange file")
    header = _parse(lines[0], 1)
    if header.get("record") != "exchange_header" or header.get("format") != EXCHANGE_FORMAT:
        raise ExchangeValidationError("missing exchange header record")
    out = ExchangeFile(model_fingerprint=header["model_fingerprint"],
                       tokenizer_spec=header.get("tokenizer_spec", ""))
    for lineno, line in enumerate(lines[1:], start=2):
        data = _parse(line, lineno)
        if data.get("record") != "tokens":
            raise ExchangeValidationError(f"line {lineno}: expected a tokens record")
        try:
            record = TokenRecord(
                item_id=data["item_id"],
                condition=ConditionLabel.from_key(data["condition"]),
                tokens=tuple(data["tokens"]),
                logprobs=tuple(float(x) for x in data["logprobs"]),
                model_fingerprint=data["model_fingerprint"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ExchangeValidationError(f"line {lineno}: malformed record ({exc})") from exc
        key = (record.item_id, record.condition.key)
        if key in out.records:
            raise ExchangeValidationError(
                f"line {lineno}: duplicate record for item {record.item_id} "
                f"condition {record.condition.key}")
        out.records[key] = record
    return out


def _parse(line: str, lineno: int) -> dict:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ExchangeValidationError(f"line {lineno}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ExchangeValidationError(f"line {lineno}: record is not an object")
    return data


def validate_exchange(exchange: ExchangeFile, suite: Suite) -> list[str]:
    """Check an exchange file against its suite; returns a list of problems.

    An empty list means the file satisfies the schema: every item of the
    suite has all four conditions, token and logprob arrays line up, and
    no record refers to an unknown item.
    """
    problems = []
    known = {item.item_id for item in suite.items}
    for (item_id, key), record in exchange.records.items():
        if item_id not in known:
            problems.append(f"record for unknown item {item_id}")
            continue
        if not record.tokens:
            problems.append(f"item {item_id} condition {key}: empty token sequence")
        if len(record.tokens) != len(record.logprobs):
            problems.append(
                f"item {item_id} condition {key}: token count mismatch "
                f"({len(record.tokens)} tokens, {len(record.logprobs)} logprobs)")
        for value in record.logprobs:
            if not math.isfinite(value):
                problems.append(f"item {item_id} condition {key}: non-finite logprob")
                break
    for item in suite.items:
        for cond in CONDITIONS:
            if (item.item_id, cond.key) not in exchange.records:
                problems.append(f"item {item.item_id}: missing condition {cond.key}")
    return problems


def require_valid(exchange: ExchangeFile, suite: Suite) -> None:
    problems = validate_exchange(exchange, suite)
    if problems:
        preview = "; ".join(problems[:5])
        more = f" (and {len(problems) - 5} more)" if len(problems) > 5 else ""
        raise ExchangeValidationError(f"exchange file invalid: {preview}{more}")
