"""Node/time budgets for exhaustive searches.

Emptiness claims downstream are only valid for searches that ran to
completion, so running out of budget is a hard error, never a silent
truncation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field


class BudgetExhaustedError(Exception):
    """A search hit its node or wall-clock limit before finishing."""

    def __init__(self, phase: str, nodes: int, elapsed: float):
        self.phase = phase
        self.nodes = nodes
        self.elapsed = elapsed
        super().__init__(
            f"budget exhausted during {phase} after {nodes} nodes, {elapsed:.3f}s"
        )


@dataclass
class Budget:
    """Mutable node counter plus an optional deadline.

    `spend` is called once per search node; it raises as soon as either
    limit is hit.  A fresh Budget with both limits None never raises.
    """

    max_nodes: int | None = None
    max_seconds: float | None = None
    phase: str = "search"
    nodes: int = 0
    _started: float = field(default_factory=time.monotonic)

    def spend(self, n: int = 1) -> None:
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhaustedError(self.phase, self.nodes, self.elapsed())
        if self.max_seconds is not None and self.elapsed() > self.max_seconds:
            raise BudgetExhaustedError(self.phase, self.nodes, self.elapsed())

    def elapsed(self) -> float:
        return time.monotonic() - self._started

    def sub(self, phase: str) -> "Budget":
        """A view on the same limits for a named sub-phase (shared counter)."""
        self.phase = phase
        return self
