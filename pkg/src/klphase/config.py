from __future__ import annotations

import os
from dataclasses import dataclass

from .solver import DEFAULT_BOUND

FORMAT_ENV = "KLPHASE_FORMAT"


def default_format() -> str:
    fmt = os.environ.get(FORMAT_ENV, "text").lower()
    return fmt if fmt in ("text", "json") else "text"


@dataclass
class RunConfig:
    command: str
    code: str | None = None
    errors: str = "all-single"
    bound: int = DEFAULT_BOUND
    fmt: str = "text"
    seed: int = 0
    samples: int = 5

    def __post_init__(self):
        if self.fmt not in ("text", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        if self.bound < 1:
            raise ValueError("lattice bound must be at least 1")
        if self.samples < 1:
            raise ValueError("need at least one φ sample")
