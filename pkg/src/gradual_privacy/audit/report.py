"""Audit result records."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass
class AuditReport:
    """Outcome of one audit.

    ``passed`` is ``statistic <= threshold``. Interval checks encode the
    absolute deviation from their target as the statistic and put the raw
    estimate and the target into ``details``.
    """

    test_name: str
    statistic: float
    threshold: float
    n_samples: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(math.isfinite(self.statistic) and self.statistic <= self.threshold)

    def to_record(self):
        return {
            "test_name": self.test_name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "n_samples": self.n_samples,
            "passed": self.passed,
            "details": self.details,
        }

    def to_json(self):
        return json.dumps(self.to_record(), sort_keys=True, default=float)


def format_table(reports):
    """Fixed-width human readable summary, one row per report."""
    rows = [("test", "statistic", "threshold", "n", "result")]
    for r in reports:
        rows.append(
            (
                r.test_name,
                f"{r.statistic:.10g}",
                f"{r.threshold:.10g}",
                str(r.n_samples),
                "PASS" if r.passed else "FAIL",
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(5)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
