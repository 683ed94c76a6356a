"""Run configuration shared by the command-line suites."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-12
    stationary: float = 1e-8
    identity: float = 1e-3
    density: float = 1e-6
    identification: float = 1e-4
    exact_limit: float = 1e-6
    hessian: float = 1e-6

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 42
    kmax: int = 4
    lambdas: tuple[Fraction, ...] = tuple(Fraction(x) for x in (-2, -1, 1, 3))
    k_range: tuple[int, int] = (2, 10)
    h: Optional[float] = None
    dt: Optional[float] = None
    t_end: Optional[float] = None
    scenario: Optional[str] = None
    suite: str = "all"
    out: Optional[str] = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    def echo(self) -> dict:
        d = asdict(self)
        d["lambdas"] = [str(x) for x in self.lambdas]
        d["k_range"] = list(self.k_range)
        d.pop("out")
        return d


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("RGLAB_THREADS", "1")))
    except ValueError:
        return 1
