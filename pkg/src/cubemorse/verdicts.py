"""Verdicts, budgets and errors shared by every checker."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

_SEVERITY = {PASS: 0, INCONCLUSIVE: 1, FAIL: 2}

DEFAULT_VERTEX_BUDGET = 10**6
DEFAULT_CELL_BUDGET = 10**7
BUDGET_ENV = "CUBEMORSE_BUDGET"


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: {needed} exceeds budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class InputError(ValueError):
    """Malformed or inconsistent user input."""


def resolve_budget(budget: int | None, default: int) -> int:
    """Explicit argument wins, then the environment variable, then `default`."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise InputError(f"{BUDGET_ENV}={env!r} is not a number") from None
    return default


def worst(statuses) -> str:
    """Aggregate statuses: any fail -> fail, else any inconclusive -> inconclusive."""
    out = PASS
    for s in statuses:
        if _SEVERITY[s] > _SEVERITY[out]:
            out = s
    return out


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: str = ""
    witness: Any = None
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in _SEVERITY:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        if self.evidence:
            out["evidence"] = self.evidence
        return out
