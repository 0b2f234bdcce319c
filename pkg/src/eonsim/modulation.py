"""Distance-adaptive modulation: reach, level selection and unit counts.

A model has modulation levels 1 .. ``levels``.  Level ``levels`` is the
densest and reaches ``top_reach``; every step toward level 1 doubles
the reach, so level m reaches ``top_reach * 2**(levels - m)``.  Sparser
levels pay in spectrum: a demand needing ``n_base`` units at the
densest level needs ``n_base * (levels + 1 - m)`` units at level m, and
in general ``ceil(n_base * log2(2 d / top_reach))`` units at distance
``d`` past ``top_reach``.

``model=None`` everywhere means no distance adaptation: any cost is
acceptable and the demand always needs exactly ``n_base`` units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INFEASIBLE = math.inf

_GUARD = 1e-9  # relative slack absorbed before ceil on float logs


@dataclass(frozen=True)
class ModulationModel:
    levels: int
    top_reach: float

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if not self.top_reach > 0:
            raise ValueError(f"top reach must be positive, got {self.top_reach}")

    @property
    def max_reach(self) -> float:
        """Reach of the sparsest level (level 1)."""
        return self.top_reach * 2 ** (self.levels - 1)


def _ceil_guarded(x: float) -> int:
    return math.ceil(x - _GUARD * abs(x))


def reach(m: int, model: ModulationModel) -> float:
    """Transmission reach of modulation level ``m``."""
    if not 1 <= m <= model.levels:
        raise ValueError(f"level {m} outside 1..{model.levels}")
    return model.top_reach * 2 ** (model.levels - m)


def modulation_level(d: float, model: ModulationModel) -> int | None:
    """Densest level whose reach covers distance ``d``, or None."""
    if d < 0:
        raise ValueError(f"negative distance {d}")
    if d <= model.top_reach:
        return model.levels
    if d > model.max_reach:
        return None
    x = math.log2(2.0 * d / model.top_reach)
    return model.levels + 1 - _ceil_guarded(x)


def required_units(n_base: int, d: float, model: ModulationModel | None):
    """Units needed to carry an ``n_base``-unit demand over distance ``d``.

    Returns INFEASIBLE (which compares greater than any width) when the
    distance exceeds the sparsest level's reach.
    """
    if n_base < 1:
        raise ValueError(f"demand units must be >= 1, got {n_base}")
    if d < 0:
        raise ValueError(f"negative distance {d}")
    if model is None or d <= model.top_reach:
        return n_base
    if d > model.max_reach:
        return INFEASIBLE
    return _ceil_guarded(n_base * math.log2(2.0 * d / model.top_reach))


def decide(label, n_base: int, model: ModulationModel | None) -> bool:
    """Can the label's contiguous units carry the demand at the label's cost?"""
    lo, hi = label.cu
    return required_units(n_base, label.cost, model) <= hi - lo + 1


def cost_limits(n_base: int, model: ModulationModel | None, max_width: int) -> list[float]:
    """Per-width integer cost ceilings equivalent to ``required_units``.

    ``limits[w]`` is the largest integer cost at which ``w`` contiguous
    units suffice, -1 when no cost does, and +inf when any does.  Exact
    for integer costs: boundaries are settled by probing required_units
    itself rather than trusting a closed-form float inverse.
    """
    limits: list[float] = [-1.0] * (max_width + 1)
    if model is None:
        for w in range(n_base, max_width + 1):
            limits[w] = math.inf
        return limits
    top = min(max_width, model.levels * n_base)
    for w in range(n_base, top + 1):
        est = model.top_reach * 2 ** (w / n_base - 1)
        c = math.floor(min(est, model.max_reach))
        while c > 0 and required_units(n_base, c, model) > w:
            c -= 1
        while required_units(n_base, c + 1, model) <= w:
            c += 1
        limits[w] = float(c)
    for w in range(top + 1, max_width + 1):
        # wider than the sparsest level ever needs: bounded by reach only
        limits[w] = limits[top] if top >= n_base else -1.0
    return limits


def make_decide(n_base: int, model: ModulationModel | None, omega: int):
    """Fast decision function ``f(cost, lo, hi)`` for integer costs."""
    limits = cost_limits(n_base, model, omega)

    def _decide(cost, lo, hi, _limits=limits):
        return cost <= _limits[hi - lo + 1]

    return _decide


def make_required(n_base: int, model: ModulationModel | None):
    """Unit-count function of path cost for one demand."""

    def _required(cost):
        return required_units(n_base, cost, model)

    return _required


def calibrate_reach(graph, factor: float, levels: int) -> ModulationModel:
    """Model whose sparsest level reaches ``factor`` times the longest
    shortest path of ``graph``."""
    from . import netgraph

    if not factor > 0:
        raise ValueError(f"reach factor must be positive, got {factor}")
    longest = netgraph.longest_shortest_path(graph)
    r1 = factor * longest
    return ModulationModel(levels=levels, top_reach=r1 / 2 ** (levels - 1))
