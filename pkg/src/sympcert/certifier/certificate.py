"""Certificate records, per-trial seeding and exact rational sampling."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass, field

from gmpy2 import mpq

from .. import __version__

OUTCOMES = ("pass", "fail", "inconclusive")
MAX_REJECTIONS = 1000


@dataclass
class Certificate:
    """Self-contained record of one check; ``dumps`` is byte-deterministic."""

    kind: str
    relation: str | None
    outcome: str
    profile: dict = field(default_factory=dict)
    seed: int | None = None
    trials: int = 0
    case: str | None = None
    evidence: dict = field(default_factory=dict)
    assumptions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    tool_version: str = __version__

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"bad outcome {self.outcome!r}")

    @property
    def passed(self) -> bool:
        return self.outcome == "pass"

    def to_json(self) -> dict:
        return _plain(asdict(self))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls(**json.loads(text))


def _plain(obj):
    """Recursively turn rationals and tuples into JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if type(obj).__name__ == "mpq":
        return str(obj)
    if hasattr(obj, "value") and hasattr(obj, "name"):   # enums
        return obj.value
    return obj


def sub_seed(seed: int, *labels) -> int:
    """64-bit seed derived from ``seed`` and labels; independent of run order."""
    text = ":".join(str(x) for x in (seed,) + labels)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


class RejectionLimit(RuntimeError):
    """Raised when a trial needs more than ``MAX_REJECTIONS`` redraws."""


class Sampler:
    """Small-height exact rationals: numerator and denominator in [-9, 9]."""

    def __init__(self, seed: int, bound: int = 9):
        self.rng = random.Random(seed)
        self.bound = bound
        self.rejections = 0

    def reject(self) -> None:
        self.rejections += 1
        if self.rejections > MAX_REJECTIONS:
            raise RejectionLimit(f"more than {MAX_REJECTIONS} rejections in one trial")

    def rat(self, nonzero: bool = False) -> mpq:
        b = self.bound
        while True:
            den = self.rng.randint(-b, b)
            if den == 0:
                continue
            num = self.rng.randint(-b, b)
            if nonzero and num == 0:
                self.reject()
                continue
            return mpq(num, den)

    def matrix(self, rows: int = 2, cols: int = 2) -> list[list[mpq]]:
        return [[self.rat() for _ in range(cols)] for _ in range(rows)]

    def invertible2(self) -> list[list[mpq]]:
        while True:
            m = self.matrix()
            if m[0][0] * m[1][1] - m[0][1] * m[1][0]:
                return m
            self.reject()

    def sl2(self) -> list[list[mpq]]:
        """Determinant-one 2x2 block: three free entries, the fourth solved."""
        a = self.rat(nonzero=True)
        b, c = self.rat(), self.rat()
        return [[a, b], [c, (1 + b * c) / a]]

    def diagonal2(self, unit: bool = False) -> list[list[mpq]]:
        a = self.rat(nonzero=True)
        d = 1 / a if unit else self.rat(nonzero=True)
        return [[a, mpq(0)], [mpq(0), d]]

    def scalar_lower2(self) -> list[list[mpq]]:
        """[[x, 0], [y, x]] with x nonzero."""
        x = self.rat(nonzero=True)
        return [[x, mpq(0)], [self.rat(), x]]
