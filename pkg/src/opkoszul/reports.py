"""Structured check reports shared by the verification modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Report:
    """Outcome of an executable check.

    ``rows`` are per-degree (or per-item) records with plain values so the
    report serializes to JSON unchanged; ``notes`` carry caveats such as the
    certified window or known range discrepancies.
    """

    name: str
    passed: bool
    rows: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "rows": self.rows,
                "notes": self.notes, "data": self.data}

    def __bool__(self) -> bool:
        return self.passed
