"""Verification reports with deterministic JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

CSV_FLOAT = "{:.17g}"


def fmt_float(value: float) -> str:
    return CSV_FLOAT.format(value + 0.0)  # folds -0.0 into 0


def _num(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    value = float(value)
    return value if math.isfinite(value) else str(value)


@dataclass
class Check:
    """One residual compared against its tolerance.

    ``relation`` is ``"<"`` when the residual must stay below the tolerance
    and ``">"`` when it must exceed it (non-constancy witnesses).
    """

    name: str
    value: float
    tolerance: float
    relation: str = "<"

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        if self.relation == "<":
            return self.value < self.tolerance
        if self.relation == ">":
            return self.value > self.tolerance
        raise ValueError(f"unknown relation {self.relation!r}")

    def to_dict(self) -> dict:
        return {"name": self.name, "value": _num(self.value), "relation": self.relation,
                "tolerance": _num(self.tolerance), "passed": self.passed}


@dataclass
class VerificationReport:
    suite: str
    config: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    statistics: dict = field(default_factory=dict)
    labels: list[str] = field(default_factory=list)
    wall_time: float = 0.0  # kept out of serialized output so reports stay byte-stable
    samples: list = field(default_factory=list, repr=False)

    def add(self, name: str, value: float, tolerance: float, relation: str = "<") -> Check:
        check = Check(name, float(value), float(tolerance), relation)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.statistics.update(other.statistics)
        self.labels.extend(other.labels)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": {k: _num(v) if not isinstance(v, dict) else {kk: _num(vv) for kk, vv in v.items()}
                       for k, v in self.config.items()},
            "checks": [c.to_dict() for c in self.checks],
            "statistics": {k: _num(v) for k, v in self.statistics.items()},
            "labels": list(self.labels),
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "name", "value", "relation", "tolerance", "passed"])
        for c in self.checks:
            writer.writerow([self.suite, c.name, fmt_float(c.value), c.relation,
                             fmt_float(c.tolerance), int(c.passed)])
        writer.writerow([self.suite, "aggregate", "", "", "", int(self.passed)])
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} {c.relation} {c.tolerance:.1e}"
                for c in self.checks]


def rows_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def rows_to_json(header: list[str], rows: list[list]) -> str:
    records = [{h: _num(v) for h, v in zip(header, row)} for row in rows]
    return json.dumps(records, indent=2) + "\n"
