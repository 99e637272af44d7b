"""Outcome record for numerical inequality checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def _plain(obj):
    """Coerce numpy scalars/arrays nested in a witness to plain Python values."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        try:
            return obj.item()
        except (AttributeError, ValueError):
            pass
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return obj


@dataclass
class CheckReport:
    """Result of verifying an inequality over one or more trials.

    ``worst_margin`` is the signed slack RHS - LHS of the tightest inequality
    encountered; the check passes iff it is at least ``-tol``.  ``witness``
    holds enough of the worst-case inputs to reproduce it.
    """

    name: str
    trials: int
    passes: int
    worst_margin: float
    tol: float
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.worst_margin >= -self.tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": int(self.trials),
            "passes": int(self.passes),
            "worst_margin": float(self.worst_margin),
            "tol": float(self.tol),
            "passed": self.passed,
            "witness": _plain(self.witness),
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}: {verdict} trials={self.trials} passes={self.passes} "
            f"worst_margin={self.worst_margin:.3e} tol={self.tol:.1e}"
        )


def combine(name: str, reports: list[CheckReport]) -> CheckReport:
    """Aggregate sub-reports: totals summed, the most binding margin kept.

    "Most binding" means smallest slack over that report's own tolerance, so
    the combined verdict agrees with the conjunction of the sub-verdicts.
    """
    if not reports:
        return CheckReport(name, 0, 0, float("inf"), 0.0)
    worst = min(reports, key=lambda r: r.worst_margin + r.tol)
    return CheckReport(
        name=name,
        trials=sum(r.trials for r in reports),
        passes=sum(r.passes for r in reports),
        worst_margin=worst.worst_margin,
        tol=worst.tol,
        witness=worst.witness,
    )
