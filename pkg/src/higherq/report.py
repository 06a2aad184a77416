"""Pass/fail bookkeeping shared by the verification routines and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    suite: str
    cases: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    millis: int = 0
    _start: float = field(default_factory=time.perf_counter, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def passed(self) -> int:
        return self.cases - len(self.failures)

    def check(self, ok: bool, input: Any, expected: Any = True, actual: Any = None) -> bool:
        self.cases += 1
        if not ok:
            self.failures.append({"input": _plain(input), "expected": _plain(expected),
                                  "actual": _plain(actual if actual is not None else not expected)})
        return ok

    def merge(self, other: "Report") -> None:
        self.cases += other.cases
        self.failures.extend(other.failures)

    def finish(self) -> "Report":
        self.millis = int((time.perf_counter() - self._start) * 1000)
        return self

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        """JSON form; without timings millis is 0 so that reruns are byte-identical."""
        return {"suite": self.suite, "cases": self.cases, "passed": self.passed,
                "failures": self.failures, "millis": self.millis if timings else 0}


def _plain(v: Any) -> Any:
    """JSON-friendly rendering: numbers, bools and strings pass, the rest is str()."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)
