from __future__ import annotations

import enum
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, replace

from .series import Comparison, Mismatch


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity or congruence check.

    ``range_checked`` is the inclusive interval of exponents (or arguments) that
    were compared.  ``first_failure`` is present exactly when the verdict is FAIL.
    """

    check_id: str
    verdict: Verdict
    order_checked: int
    range_checked: tuple[int, int]
    first_failure: Mismatch | None = None
    runtime_ms: int = 0
    detail: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.FAIL and self.first_failure is None:
            raise ValueError(f"{self.check_id}: FAIL report needs a first_failure")

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict:
        ff = self.first_failure
        return {
            "check_id": self.check_id,
            "verdict": self.verdict.value,
            "order_checked": self.order_checked,
            "range_checked": list(self.range_checked),
            "first_failure": None
            if ff is None
            else {"index": ff.index, "expected": str(ff.expected), "actual": str(ff.actual)},
            "runtime_ms": self.runtime_ms,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict) -> VerificationReport:
        ff = data.get("first_failure")
        return cls(
            check_id=data["check_id"],
            verdict=Verdict(data["verdict"]),
            order_checked=int(data["order_checked"]),
            range_checked=tuple(int(x) for x in data["range_checked"]),
            first_failure=None
            if ff is None
            else Mismatch(int(ff["index"]), int(ff["expected"]), int(ff["actual"])),
            runtime_ms=int(data.get("runtime_ms", 0)),
            detail=data.get("detail", ""),
        )


def reports_to_json(reports, *, timings: bool = True) -> str:
    rows = [r.to_dict() for r in reports]
    if not timings:
        for row in rows:
            row["runtime_ms"] = 0
    return json.dumps(rows, indent=2)


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]


def from_comparison(
    check_id: str, cmp: Comparison, order: int, lo: int = 0, hi: int | None = None, detail: str = ""
) -> VerificationReport:
    hi = order if hi is None else hi
    if cmp.equal:
        return VerificationReport(check_id, Verdict.PASS, order, (lo, hi), detail=detail)
    return VerificationReport(
        check_id, Verdict.FAIL, order, (lo, hi), first_failure=cmp.mismatch, detail=detail
    )


def first_failing(
    check_id: str, order: int, lo: int, hi: int, pairs, detail: str = ""
) -> VerificationReport:
    """Build a report from ``(index, expected, actual)`` triples, one per index."""
    for index, expected, actual in pairs:
        if expected != actual:
            return VerificationReport(
                check_id,
                Verdict.FAIL,
                order,
                (lo, hi),
                first_failure=Mismatch(index, expected, actual),
                detail=detail,
            )
    return VerificationReport(check_id, Verdict.PASS, order, (lo, hi), detail=detail)


def combine(check_id: str, parts: list[VerificationReport], order: int) -> VerificationReport:
    """Fold several sub-reports into one; the first failing part decides."""
    lo = min((p.range_checked[0] for p in parts), default=0)
    hi = max((p.range_checked[1] for p in parts), default=order)
    for p in parts:
        if p.verdict is Verdict.FAIL:
            return VerificationReport(
                check_id,
                Verdict.FAIL,
                order,
                (lo, hi),
                first_failure=p.first_failure,
                detail=f"{p.check_id}: {p.detail}".rstrip(": "),
            )
    return VerificationReport(
        check_id, Verdict.PASS, order, (lo, hi), detail=f"{len(parts)} sub-checks"
    )


@contextmanager
def timed():
    """Yield a callable that stamps runtime_ms onto a report."""
    start = time.perf_counter()

    def stamp(report: VerificationReport) -> VerificationReport:
        ms = int((time.perf_counter() - start) * 1000)
        return replace(report, runtime_ms=ms)

    yield stamp
