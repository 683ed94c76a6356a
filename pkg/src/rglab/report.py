"""Versioned JSON reports and CSV dumps."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

import numpy as np

SCHEMA = "rg-taylor-lab/1"
Status = Literal["pass", "fail", "inconclusive"]


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return {"value": str(obj), "num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return x
    return obj


@dataclass
class Check:
    name: str
    status: Status
    values: dict = field(default_factory=dict)

    @classmethod
    def of(cls, name: str, ok: bool, **values) -> "Check":
        return cls(name, "pass" if ok else "fail", values)


@dataclass
class Report:
    command: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def status(self) -> Status:
        statuses = {c.status for c in self.checks}
        if "fail" in statuses:
            return "fail"
        if "inconclusive" in statuses:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "inconclusive": 2, "fail": 1}[self.status]

    def to_dict(self) -> dict:
        return to_jsonable({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "status": self.status,
            "checks": [{"name": c.name, "status": c.status, "values": c.values} for c in self.checks],
            "wall_time": self.wall_time,
        })

    def to_json(self, include_wall_time: bool = True) -> str:
        data = self.to_dict()
        if not include_wall_time:
            data.pop("wall_time")
        return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_density_csv(path: Path, times: np.ndarray, x: np.ndarray, densities: np.ndarray,
                      x_stride: int = 1) -> None:
    """Long-format ``t,x,rho`` table with LF line endings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "x", "rho"])
        xs = x[::x_stride]
        for t, row in zip(times, densities):
            for xi, r in zip(xs, row[::x_stride]):
                writer.writerow([repr(float(t)), repr(float(xi)), repr(float(r))])
