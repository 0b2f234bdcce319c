"""Per-search memory accounting in 32-bit words.

A cost occupies one word, an edge reference two, and a contiguous unit
block two (its end units).  The searches report the peak number of
words held by their live data structures: label sets for the
spectrum-aware search, vertex labels plus the queue for the classic
searches inside the slot enumeration, and the state queue for the
exhaustive path search.
"""

from __future__ import annotations

COST_WORDS = 1
EDGE_WORDS = 2
CU_WORDS = 2


def label_words(n: int = 1) -> int:
    """Words held by n spectrum-carrying labels (cost + edge + CU)."""
    return n * (COST_WORDS + EDGE_WORDS + CU_WORDS)


def vertex_label_words(n: int = 1) -> int:
    """Words held by n classic labels (cost + edge)."""
    return n * (COST_WORDS + EDGE_WORDS)


def path_entry_words(n_edges: int, n_cus: int) -> int:
    """Words held by one queued path: cost, edge list and unit set."""
    return COST_WORDS + EDGE_WORDS * n_edges + CU_WORDS * n_cus


class WordMeter:
    """Running maximum of live instrumented words.

    ``add``/``remove`` follow words entering and leaving live
    structures; ``fold`` offers the peak of a completed transient
    structure as a candidate maximum.  The cost/edge/unit split kept is
    the one observed at the maximum total.
    """

    __slots__ = ("max_words", "cost_words", "edge_words", "unit_words",
                 "_cost", "_edge", "_unit")

    def __init__(self):
        self.max_words = 0
        self.cost_words = 0
        self.edge_words = 0
        self.unit_words = 0
        self._cost = 0
        self._edge = 0
        self._unit = 0

    def add(self, cost_w: int, edge_w: int, unit_w: int) -> None:
        self._cost += cost_w
        self._edge += edge_w
        self._unit += unit_w
        total = self._cost + self._edge + self._unit
        if total > self.max_words:
            self.max_words = total
            self.cost_words = self._cost
            self.edge_words = self._edge
            self.unit_words = self._unit

    def remove(self, cost_w: int, edge_w: int, unit_w: int) -> None:
        self._cost -= cost_w
        self._edge -= edge_w
        self._unit -= unit_w

    def fold(self, cost_w: int, edge_w: int, unit_w: int) -> None:
        total = cost_w + edge_w + unit_w
        if total > self.max_words:
            self.max_words = total
            self.cost_words = cost_w
            self.edge_words = edge_w
            self.unit_words = unit_w
