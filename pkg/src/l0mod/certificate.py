from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Certificate:
    """Verdict of a checker.

    ``witness`` is set only on failure and holds the concrete inputs that
    exhibit the violation.  ``evidence`` records how the verdict was reached
    (seed, sample counts, whether it was structural or sampled).
    """

    check: str
    passed: bool
    witness: dict[str, Any] | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"
