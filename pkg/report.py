# report.py — итог подкоманды: параметры, строки-результаты, исход, время
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Tuple

import pandas as pd

OUTCOMES = ("pass", "fail", "inconclusive")
EXIT_CODES = {"pass": 0, "fail": 1, "inconclusive": 2}
EXIT_USAGE = 3

# статусы строк, которые делают весь отчёт проваленным
_FAILING = ("fail", "error")


@dataclass
class Report:
    subcommand: str
    params: List[Tuple[str, Any]] = field(default_factory=list)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    timing: float = 0.0
    trace: List[str] = field(default_factory=list)  # пошаговое объяснение (hunt --explain)

    def add(self, **row: Any) -> None:
        self.rows.append(row)

    def extend(self, rows: List[Dict[str, Any]]) -> None:
        self.rows.extend(rows)

    @property
    def outcome(self) -> str:
        statuses = [str(r.get("status", "pass")) for r in self.rows]
        if any(s in _FAILING for s in statuses):
            return "fail"
        if "inconclusive" in statuses:
            return "inconclusive"
        return "pass"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]

    def count(self, status: str) -> int:
        return sum(1 for r in self.rows if r.get("status") == status)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def render(self, tsv: bool = False) -> str:
        """Выровненная таблица или TSV; пустой отчёт — пустая строка."""
        if not self.rows:
            return ""
        df = self.to_frame().fillna("")
        if tsv:
            return df.to_csv(sep="\t", index=False).rstrip("\n")
        return df.to_string(index=False)

    def header(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.subcommand} {params}".rstrip()


class timed:
    """with timed(report): ... — записывает время выполнения в report.timing."""

    def __init__(self, report: Report) -> None:
        self.report = report
        self._start = 0.0

    def __enter__(self) -> Report:
        self._start = time.perf_counter()
        return self.report

    def __exit__(self, *exc: object) -> None:
        self.report.timing = time.perf_counter() - self._start


def iter_failures(report: Report) -> Iterator[Dict[str, Any]]:
    return (r for r in report.rows if r.get("status") in _FAILING)
