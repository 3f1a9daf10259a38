"""Run configuration and result records with lossless CSV / JSON-lines serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable

CSV_HEADER = ("kappa", "s", "route", "value", "order0", "order1", "order2", "tail_estimate", "n_max", "basis_size")
COMMANDS = ("sumrule", "spectrum", "sweep-fit", "verify")


@dataclass
class RunConfig:
    command: str
    s: float | None = None
    kappa: float | None = None
    kappa_grid: tuple | None = None
    route: str = "perturbative"
    n_max: int = 200
    basis_size: int = 2001
    truncation: int = 2000
    gamma_sequence: tuple = (1e-3, 1e-4, 1e-5, 1e-6)
    K_double_sum: int = 2000
    degree: int = 4
    levels: int = 10
    quick: bool = False
    timing: bool = False
    workers: int = 1
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.kappa is not None and not -2.0 < self.kappa < 2.0:
            raise ValueError("kappa must lie in (-2, 2) so that 1 + kappa x > 0")
        if self.kappa_grid is not None:
            self.kappa_grid = tuple(float(k) for k in self.kappa_grid)
            if any(not -2.0 < k < 2.0 for k in self.kappa_grid):
                raise ValueError("every kappa in the grid must lie in (-2, 2)")
        self.gamma_sequence = tuple(float(g) for g in self.gamma_sequence)
        if any(g <= 0.0 for g in self.gamma_sequence) or any(
            b >= a for a, b in zip(self.gamma_sequence, self.gamma_sequence[1:])
        ):
            raise ValueError("gamma_sequence must be positive and strictly decreasing")
        if self.n_max < 1 or self.basis_size < 2 or self.n_max >= self.basis_size - 1:
            raise ValueError("need 1 <= n_max < basis_size - 1")
        if self.truncation < 2:
            raise ValueError("truncation must be at least 2")
        if self.K_double_sum < 100:
            raise ValueError("K_double_sum must be at least 100")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class ResultRecord:
    """One emitted value; ``tail_estimate`` is always present."""

    config: dict
    route: str
    value: float
    tail_estimate: float
    s: float | None = None
    kappa: float | None = None
    orders: list | None = None
    extra: dict = field(default_factory=dict)
    wall_time: float | None = None
    version: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, allow_nan=True)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        data = json.loads(line)
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    def csv_row(self) -> list[str]:
        orders = self.orders or [None, None, None]
        cfg = self.config
        return [
            _fmt(self.kappa),
            _fmt(self.s),
            self.route,
            _fmt(self.value),
            *(_fmt(o) for o in orders),
            _fmt(self.tail_estimate),
            str(cfg.get("n_max", "")),
            str(cfg.get("basis_size", "")),
        ]


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def _parse(text: str):
    return None if text == "" else float(text)


def to_csv(records: Iterable[ResultRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def from_csv(text: str) -> list[dict]:
    """Rows of a CSV written by :func:`to_csv`, numeric fields parsed back to float."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = {k: (row[k] if k == "route" else _parse(row[k])) for k in CSV_HEADER}
        rows.append(parsed)
    return rows


def to_json_lines(records: Iterable[ResultRecord]) -> str:
    return "".join(r.to_json() + "\n" for r in records)


def from_json_lines(text: str) -> list[ResultRecord]:
    return [ResultRecord.from_json(line) for line in text.splitlines() if line.strip()]


def finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None
