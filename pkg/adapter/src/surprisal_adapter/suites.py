"""Reader for the suite file contract.

The adapter consumes suite files only through their documented
line-delimited layout (header record, then item records with four
condition cells), deliberately without importing the producing package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

CONDITION_KEYS = ("+m+l", "-m+l", "+m-l", "-m-l")
SUITE_FORMAT = "letalone-suite"


class SuiteFileError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteItem:
    item_id: str
    conditions: dict[str, tuple[str, str]]  # key -> (context, sentence)


@dataclass(frozen=True)
class SuiteFile:
    property: str
    lexicon_fingerprint: str
    items: tuple[SuiteItem, ...]


def read_suite_file(path: str | Path) -> SuiteFile:
    with open(path, encoding="utf-8") as f:
        lines = [line for line in (raw.strip() for raw in f) if line]
    if not lines:
        raise SuiteFileError(f"{path}: empty suite file")
    header = json.loads(lines[0])
    if header.get("record") != "suite_header" or header.get("format") != SUITE_FORMAT:
        raise SuiteFileError(f"{path}: missing suite header record")
    items = []
    for lineno, line in enumerate(lines[1:], start=2):
        data = json.loads(line)
        if data.get("record") != "item":
            raise SuiteFileError(f"{path}:{lineno}: expected an item record")
        conditions = {}
        for key in CONDITION_KEYS:
            try:
                cell = data["conditions"][key]
                conditions[key] = (cell["context"], cell["sentence"])
            except KeyError:
                raise SuiteFileError(
                    f"{path}:{lineno}: item {data.get('item_id')!r} lacks "
                    f"condition {key}") from None
        items.append(SuiteItem(item_id=data["item_id"], conditions=conditions))
    return SuiteFile(property=header["property"],
                     lexicon_fingerprint=header.get("lexicon_fingerprint", ""),
                     items=tuple(items))
