from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from ..features import SCHEMA_VERSION

FORMAT = "steinerlearn-model/1"


class ModelFormatError(ValueError):
    pass


@dataclass
class ModelParams:
    variant: str
    blocks: list[dict[str, np.ndarray]]
    hyper: dict
    seed: int = 0
    schema: str = SCHEMA_VERSION
    losses: list[float] = field(default_factory=list)

    def copy(self) -> "ModelParams":
        return ModelParams(self.variant, [{k: v.copy() for k, v in b.items()} for b in self.blocks],
                           copy.deepcopy(self.hyper), self.seed, self.schema, list(self.losses))

    def flat(self) -> np.ndarray:
        return np.concatenate([v.ravel() for b in self.blocks for v in b.values()])

    def to_json(self) -> str:
        doc = {
            "format": FORMAT,
            "variant": self.variant,
            "schema": self.schema,
            "seed": self.seed,
            "hyper": self.hyper,
            "losses": self.losses,
            # row-major float64; json floats use shortest round-trip repr
            "blocks": [{k: {"shape": list(v.shape), "data": v.ravel().tolist()} for k, v in b.items()}
                       for b in self.blocks],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"model file is not valid JSON: {exc}") from None
        if doc.get("format") != FORMAT:
            raise ModelFormatError(f"unsupported model format {doc.get('format')!r}; expected {FORMAT!r}")
        blocks = [{k: np.array(t["data"], dtype=np.float64).reshape(t["shape"]) for k, t in b.items()}
                  for b in doc["blocks"]]
        for b in blocks:
            for k, v in b.items():
                if not np.all(np.isfinite(v)):
                    raise ModelFormatError(f"non-finite entries in parameter {k}")
        return cls(doc["variant"], blocks, doc["hyper"], doc["seed"], doc["schema"], doc.get("losses", []))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ModelParams":
        return cls.from_json(Path(path).read_text())
