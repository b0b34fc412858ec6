"""Static pretraining manifest.

The neural pretraining itself is out of scope for this toolkit (it needs
GPU-days); the manifest records the exact hyperparameters a training run
should use, so downstream jobs consume it verbatim.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import IO


@dataclass(frozen=True)
class TrainingManifest:
    architecture: str = "OPT"
    embed_size: int = 768
    ffn_dimension: int = 3072
    num_layers: int = 12
    attention_heads: int = 12
    vocab_size: int = 16384
    max_seq_length: int = 256
    batch_size: int = 32
    warmup_steps: int = 32000
    epochs: int = 20
    learning_rate: float = 1e-4
    total_parameters: int = 97_000_000
    training_tokens: int = 100_000_000

    def validate(self) -> None:
        for name, value in asdict(self).items():
            if isinstance(value, (int, float)) and value <= 0:
                raise ValueError(f"manifest field {name} must be positive, got {value}")
            if isinstance(value, str) and not value:
                raise ValueError(f"manifest field {name} must be nonempty")

    def to_dict(self) -> dict:
        return asdict(self)


def write_manifest(destination: str | Path | IO[str],
                   manifest: TrainingManifest | None = None) -> TrainingManifest:
    manifest = manifest or TrainingManifest()
    manifest.validate()
    payload = json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
    if hasattr(destination, "write"):
        destination.write(payload)
    else:
        with open(destination, "w", encoding="utf-8") as f:
            f.write(payload)
    return manifest


def read_manifest(source: str | Path | IO[str]) -> TrainingManifest:
    if hasattr(source, "read"):
        data = json.load(source)
    else:
        with open(source, encoding="utf-8") as f:
            data = json.load(f)
    manifest = TrainingManifest(**data)
    manifest.validate()
    return manifest
