"""
Loss trace store shared by the direct optimizer, the trainers and the cli.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List
from .subscribeable import Subscribeable

@dataclass(frozen=True)
class TraceRow:
    """One evaluated iterate: its step index, per-term values and weighted total."""
    step: int
    terms: Dict[str, float] = field(default_factory=dict)
    total: float = 0.0

class LossTrace(Subscribeable):
    """
    Append-only record of loss values, one row per evaluated step.

    Every `append` publishes the new row to the subscribers.

    Attributes:
        columns (List[str]): Term names, in CSV column order.
        rows (List[TraceRow]): Rows in append order.
    """

    def __init__(self, columns: List[str]) -> None:
        super().__init__(None)
        self.columns: List[str] = list(columns)
        self.rows: List[TraceRow] = []

    def append(self, step: int, terms: Dict[str, float], total: float) -> TraceRow:
        """
        Record a step and notify subscribers.

        Args:
            step (int): Step index.
            terms (Dict[str, float]): Term values; missing columns are stored as 0.
            total (float): Weighted total of the step.

        Returns:
            TraceRow: The stored row.
        """
        row = TraceRow(
            step=int(step),
            terms={name: float(terms.get(name, 0.0)) for name in self.columns},
            total=float(total)
        )
        self.rows.append(row)
        self.publish(row)
        return row

    def __len__(self) -> int:
        return len(self.rows)

    def totals(self) -> List[float]:
        return [row.total for row in self.rows]

    def best(self) -> TraceRow:
        """
        The row with the lowest finite total; the earliest one on ties.

        Raises:
            ValueError: If the trace is empty or has no finite total.
        """
        finite = [row for row in self.rows if math.isfinite(row.total)]
        if not finite:
            raise ValueError("The loss trace has no finite total.")
        return min(finite, key=lambda row: (row.total, row.step))

    def header(self) -> str:
        return ','.join(['step', *self.columns, 'total'])

    @staticmethod
    def formatRow(row: TraceRow, columns: List[str]) -> str:
        values = [repr(row.terms[name]) for name in columns]
        return ','.join([str(row.step), *values, repr(row.total)])

    def toCsv(self) -> List[str]:
        """
        Render the trace as CSV lines: `step,<columns...>,total`.

        Floats use the shortest round-trip representation, so identical runs
        produce byte-identical files.
        """
        return [self.header(), *(self.formatRow(row, self.columns) for row in self.rows)]
