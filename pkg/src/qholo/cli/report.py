"""Run reports: scalars with declared expectations and provenance."""
from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy

from .. import __version__

SOURCES = ("published", "analytic", "none")
COMPARISONS = ("abs", "rel", "<", "<=", ">", ">=", "==")


@dataclass
class Scalar:
    """A reported number; ``expected``/``tolerance`` define pass/fail via ``comparison``.

    abs: |value - expected| <= tol; rel: |value/expected - 1| <= tol;
    the order comparisons test value against ``expected``.
    """

    name: str
    value: float
    unit: str = ""
    source: str = "none"
    expected: float | None = None
    tolerance: float | None = None
    comparison: str | None = None
    note: str = ""

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown expectation source {self.source!r}")
        if self.comparison is not None and self.comparison not in COMPARISONS:
            raise ValueError(f"unknown comparison {self.comparison!r}")
        self.value = float(self.value)

    @property
    def passed(self) -> bool | None:
        if self.comparison is None:
            return None
        v, e, tol = self.value, self.expected, self.tolerance
        return bool({
            "abs": lambda: abs(v - e) <= tol,
            "rel": lambda: abs(v / e - 1) <= tol,
            "<": lambda: v < e,
            "<=": lambda: v <= e,
            ">": lambda: v > e,
            ">=": lambda: v >= e,
            "==": lambda: v == e,
        }[self.comparison]())

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunReport:
    scenario: str
    config: dict
    seed: int
    scalars: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    wall_time_s: float = 0.0

    def add(self, *args, **kw) -> Scalar:
        s = Scalar(*args, **kw)
        self.scalars.append(s)
        return s

    @property
    def passed(self) -> bool:
        return all(s.passed is not False for s in self.scalars)

    @property
    def failures(self) -> list:
        return [s.name for s in self.scalars if s.passed is False]

    def provenance(self) -> dict:
        return {"config_hash": config_hash(self.config), "seed": self.seed,
                "version": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                "python": platform.python_version()}

    def as_dict(self) -> dict:
        return {"scenario": self.scenario, "passed": self.passed, "failures": self.failures,
                "wall_time_s": self.wall_time_s, "scalars": [s.as_dict() for s in self.scalars],
                "artifacts": sorted(self.artifacts), "config": self.config,
                "provenance": self.provenance()}
