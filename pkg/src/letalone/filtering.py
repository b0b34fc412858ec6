"""Pattern-based whole-unit removal for pretraining corpora.

Each scenario names a set of literal patterns; any removal unit (line by
default, heuristic sentence optionally) containing a match is dropped in
full, and everything else passes through byte-identically. Matching is
ASCII case-insensitive with word-boundary semantics: a match may not touch
a letter on either side, and hyphens and apostrophes count as letters, so
"letting", "lonely", "alone-ness" and "let's" never match "let"/"alone".
A substring mode without boundaries exists for sensitivity analysis.
"""

from __future__ import annotations

import hashlib
import json
import re
import string
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

_ASCII_LOWER = str.maketrans(string.ascii_uppercase, string.ascii_lowercase)
_EXTRA_WORD_CHARS = "'’-"  # apostrophes (straight and curly) and hyphen

LINE = "line"
SENTENCE = "sentence"
WORD = "word"
SUBSTRING = "substring"

# Boundary after terminal punctuation (plus closing quotes) and whitespace,
# just before a capital; the whitespace stays with the preceding unit so
# concatenating units reproduces the line exactly.
_SENTENCE_BOUNDARY = re.compile(r"[.!?][\"'\)\]]*\s+(?=[\"'\(\[]*[A-Z])")


class FilterInputError(ValueError):
    """Input stream is not decodable UTF-8 text."""


class UnknownScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class FilterScenario:
    name: str
    patterns: tuple[str, ...]
    removal_unit: str = LINE
    match_mode: str = WORD

    def __post_init__(self):
        if self.removal_unit not in (LINE, SENTENCE):
            raise ValueError(f"unknown removal unit {self.removal_unit!r}")
        if self.match_mode not in (WORD, SUBSTRING):
            raise ValueError(f"unknown match mode {self.match_mode!r}")
        for pattern in self.patterns:
            if not pattern:
                raise ValueError("patterns must be nonempty")
            if "\n" in pattern or "\r" in pattern or "\t" in pattern:
                raise ValueError(f"pattern contains forbidden whitespace: {pattern!r}")
            bad = set(pattern) & set(".^$*+?{}[]()|\\")
            if bad:
                raise ValueError(
                    f"pattern {pattern!r} contains regex metacharacters {sorted(bad)}; "
                    "patterns are plain literals")


NO_FILTERING = FilterScenario("NoFiltering", ())

_PATTERN_SETS = {
    "NoPairedFocus": ("let alone", "much less", "never mind", "not to mention"),
    "NoPairedFocComp": ("let alone", "much less", "never mind", "not to mention",
                        "more than", "less than"),
    "NoLet": ("let",),
    "NoAlone": ("alone",),
    "NoLetorAlone": ("let", "alone"),
}


def scenario_catalog() -> tuple[FilterScenario, ...]:
    """The five pattern-bearing scenarios, in canonical order."""
    return tuple(FilterScenario(name, patterns) for name, patterns in _PATTERN_SETS.items())


def get_scenario(name: str, *, removal_unit: str = LINE,
                 match_mode: str = WORD) -> FilterScenario:
    if name == NO_FILTERING.name:
        return FilterScenario(name, (), removal_unit, match_mode)
    if name not in _PATTERN_SETS:
        known = ", ".join([NO_FILTERING.name, *_PATTERN_SETS])
        raise UnknownScenarioError(f"unknown scenario {name!r}; known scenarios: {known}")
    return FilterScenario(name, _PATTERN_SETS[name], removal_unit, match_mode)


@dataclass
class FilterReport:
    scenario: str
    removal_unit: str
    match_mode: str
    lines_in: int = 0
    lines_removed: int = 0
    units_in: int = 0
    units_removed: int = 0
    pattern_unit_counts: dict[str, int] = field(default_factory=dict)
    corpus_fingerprint_in: str = ""
    corpus_fingerprint_out: str = ""

    @property
    def lines_out(self) -> int:
        return self.lines_in - self.lines_removed

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "removal_unit": self.removal_unit,
            "match_mode": self.match_mode,
            "lines_in": self.lines_in,
            "lines_removed": self.lines_removed,
            "lines_out": self.lines_out,
            "units_in": self.units_in,
            "units_removed": self.units_removed,
            "pattern_unit_counts": dict(sorted(self.pattern_unit_counts.items())),
            "corpus_fingerprint_in": self.corpus_fingerprint_in,
            "corpus_fingerprint_out": self.corpus_fingerprint_out,
        }

    def save(self, destination: str | Path | IO[str]) -> None:
        payload = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if hasattr(destination, "write"):
            destination.write(payload)
        else:
            with open(destination, "w", encoding="utf-8") as f:
                f.write(payload)


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch in _EXTRA_WORD_CHARS


class _Matcher:
    """Finds literal patterns, ASCII case-folded, with word-boundary checks."""

    def __init__(self, patterns: Iterable[str], match_mode: str):
        self.patterns = tuple(patterns)
        self.folded = tuple(p.translate(_ASCII_LOWER) for p in self.patterns)
        self.boundaries = match_mode == WORD

    def _candidate_ok(self, text: str, start: int, end: int) -> bool:
        if not self.boundaries:
            return True
        if start > 0 and _is_word_char(text[start - 1]):
            return False
        if end < len(text) and _is_word_char(text[end]):
            return False
        return True

    def matched_patterns(self, text: str) -> list[str]:
        """Original pattern strings with at least one match in ``text``."""
        folded_text = text.translate(_ASCII_LOWER)
        hits = []
        for original, pattern in zip(self.patterns, self.folded):
            pos = folded_text.find(pattern)
            while pos != -1:
                if self._candidate_ok(folded_text, pos, pos + len(pattern)):
                    hits.append(original)
                    break
                pos = folded_text.find(pattern, pos + 1)
        return hits

    def matches(self, text: str) -> bool:
        return bool(self.matched_patterns(text))

    def match_line_indices(self, lines: list[str]) -> dict[int, list[str]]:
        """Map index -> matched patterns over a block of lines.

        One fold and one C-level substring scan per pattern over the whole
        block; per-line work happens only at candidate positions. Patterns
        never span lines because none contains a newline.
        """
        block = "".join(lines)
        folded = block.translate(_ASCII_LOWER)
        starts = [0]
        for line in lines:
            starts.append(starts[-1] + len(line))
        hits: dict[int, list[str]] = {}
        for original, pattern in zip(self.patterns, self.folded):
            seen: set[int] = set()
            pos = folded.find(pattern)
            while pos != -1:
                if self._candidate_ok(folded, pos, pos + len(pattern)):
                    index = bisect_right(starts, pos) - 1
                    if index not in seen:
                        seen.add(index)
                        hits.setdefault(index, []).append(original)
                pos = folded.find(pattern, pos + 1)
        return hits


def split_sentences(body: str) -> list[str]:
    """Heuristic sentence units; concatenating them reproduces ``body``.

    ``body`` must not include the line terminator.
    """
    if not body:
        return []
    units = []
    start = 0
    for match in _SENTENCE_BOUNDARY.finditer(body):
        units.append(body[start:match.end()])
        start = match.end()
    units.append(body[start:])
    return units


def _iter_lines(source: str | bytes | Path | Iterable[str]) -> Iterator[str]:
    if isinstance(source, bytes):
        try:
            text = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FilterInputError(
                f"input is not valid UTF-8 at byte offset {exc.start}") from exc
        yield from text.splitlines(keepends=True)
    elif isinstance(source, Path):
        with open(source, "rb") as f:
            data = f.read()
        yield from _iter_lines(data)
    elif isinstance(source, str):
        yield from source.splitlines(keepends=True)
    else:
        yield from source


def _blocks(lines: Iterator[str], size: int) -> Iterator[list[str]]:
    block: list[str] = []
    for line in lines:
        block.append(line)
        if len(block) >= size:
            yield block
            block = []
    if block:
        yield block


def filter_corpus(source: str | bytes | Path | Iterable[str], scenario: FilterScenario,
                  sink: IO[str] | None = None, *,
                  block_lines: int = 8192) -> tuple[list[str] | None, FilterReport]:
    """Drop every removal unit that matches the scenario; keep the rest verbatim.

    ``source`` may be text, UTF-8 bytes, a path, or an iterable of lines
    (with terminators). Kept lines are returned as a list, or written to
    ``sink`` when one is given (then the list is None). The report carries
    exact counts and input/output fingerprints.
    """
    matcher = _Matcher(scenario.patterns, scenario.match_mode)
    report = FilterReport(scenario=scenario.name, removal_unit=scenario.removal_unit,
                          match_mode=scenario.match_mode,
                          pattern_unit_counts={p: 0 for p in scenario.patterns})
    digest_in = hashlib.sha256()
    digest_out = hashlib.sha256()
    kept: list[str] | None = None if sink is not None else []

    def emit_batch(lines_out: list[str]) -> None:
        if not lines_out:
            return
        digest_out.update("".join(lines_out).encode("utf-8"))
        if sink is not None:
            sink.write("".join(lines_out))
        else:
            kept.extend(lines_out)

    lines = _iter_lines(source)
    if scenario.removal_unit == LINE:
        for block in _blocks(lines, block_lines):
            report.lines_in += len(block)
            report.units_in += len(block)
            digest_in.update("".join(block).encode("utf-8"))
            hits = matcher.match_line_indices(block) if scenario.patterns else {}
            if not hits:
                emit_batch(block)
                continue
            surviving = []
            for index, line in enumerate(block):
                matched = hits.get(index)
                if matched:
                    report.lines_removed += 1
                    report.units_removed += 1
                    for pattern in matched:
                        report.pattern_unit_counts[pattern] += 1
                else:
                    surviving.append(line)
            emit_batch(surviving)
    else:
        for line in lines:
            report.lines_in += 1
            digest_in.update(line.encode("utf-8"))
            body = line.rstrip("\r\n")
            terminator = line[len(body):]
            surviving = []
            removed_any = False
            for unit in split_sentences(body):
                report.units_in += 1
                matched = matcher.matched_patterns(unit) if scenario.patterns else []
                if matched:
                    report.units_removed += 1
                    removed_any = True
                    for pattern in matched:
                        report.pattern_unit_counts[pattern] += 1
                else:
                    surviving.append(unit)
            if not removed_any:
                emit_batch([line])
            elif any(unit.strip() for unit in surviving):
                # the terminator survives with the line even when the final
                # sentence was the one removed
                emit_batch(["".join(surviving) + terminator])
            else:
                report.lines_removed += 1

    report.corpus_fingerprint_in = digest_in.hexdigest()
    report.corpus_fingerprint_out = digest_out.hexdigest()
    return kept, report
