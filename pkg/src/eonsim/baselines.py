"""Two optimal reference algorithms for the same routing problem.

``filtered_search`` enumerates every candidate slot (width and aligned
start), filters the graph to the edges supporting the slot and runs
classic Dijkstra on each filtered graph.  ``brute_search`` enumerates
loop-free paths best-first, carrying the full unit set usable along
each path.  Both return the same cost and unit width as the
label-setting search; they exist as independent checks and as
performance baselines, so they deliberately share no search logic
with it.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import NamedTuple
from heapq import heappop, heappush

from . import modulation, spectrum
from .netgraph import _dijkstra_core
from .routing import Policy, RouteResult


class SlotSpec(NamedTuple):
    """An aligned candidate assignment: ``width`` units from ``start``,
    usable up to ``max_distance``."""

    start: int
    width: int
    max_distance: float


class PathState(NamedTuple):
    """A queued loop-free path in the exhaustive search.

    ``units`` is every unit block usable over all path edges and
    ``visited`` a vertex bit set guarding against revisits.
    """

    cost: int
    vertex: int
    edges: tuple[int, ...]
    units: spectrum.UnitSet
    visited: int


def max_reach_for_units(n: int, n_base: int, model) -> float:
    """Largest distance at which ``n`` contiguous units carry the demand.

    Inverse of the unit-count formula; +inf without a model.
    """
    if n_base < 1:
        raise ValueError(f"demand units must be >= 1, got {n_base}")
    if n < n_base:
        raise ValueError(f"width {n} below demand size {n_base}")
    if model is None:
        return math.inf
    if n > model.levels * n_base:
        raise ValueError(f"width {n} beyond the sparsest level's need")
    return min(model.max_reach, model.top_reach * 2 ** ((n - n_base) / n_base))


def filter_graph(g, slot: SlotSpec) -> tuple[int, ...]:
    """Ids of the edges whose available units cover the whole slot."""
    if slot.start < 0 or slot.width < 1 or slot.start + slot.width > g.omega:
        raise ValueError(f"slot {slot} outside universe of {g.omega}")
    cu = (slot.start, slot.start + slot.width - 1)
    return tuple(e for e in range(g.edge_count)
                 if spectrum.contains_cu(g.au[e], cu))


def _run_mask(bits: int, n: int) -> int:
    """Bit j set iff units j..j+n-1 are all set in ``bits``."""
    r = bits
    need = n - 1
    shift = 1
    while need and r:
        s = shift if shift < need else need
        r &= r >> s
        need -= s
        shift <<= 1
    return r


def filtered_search(g, s, t, n_base: int, model, policy=Policy.FIRST_FIT,
                    rng=None, meter=None, counters=None):
    """Optimal route by exhaustive slot enumeration.

    Every width from ``n_base`` to the sparsest level's need and every
    aligned start yields one slot; classic Dijkstra runs on the graph
    filtered to the edges supporting it, and a route is feasible when
    its cost stays within what the slot width can reach.  The cheapest
    feasible route wins; slot ties follow the policy (FIRST_FIT lowest
    start then smallest width, BEST_FIT smallest width then lowest
    start, RANDOM_FIT uniform).  Slots with identical filtered edge
    sets share one Dijkstra run; every slot is still examined, and
    ``counters['slots']`` receives the exact count.
    """
    omega = g.omega
    if rng is None:
        rng = random.Random(0)
    levels = 1 if model is None else model.levels
    top_w = min(levels * n_base, omega)
    limits = modulation.cost_limits(n_base, model, top_w)
    au_bits = [spectrum.to_bits(a) for a in g.au]
    n_edges = g.edge_count
    adj = g.adj
    nv = g.n_vertices
    cache: dict[int, tuple] = {}
    best_cost = None
    best_slots = []  # (start, width, path)
    slots = 0
    for n in range(n_base, top_w + 1):
        ceiling = limits[n]
        runs = [_run_mask(b, n) for b in au_bits]
        changes = 0
        for r in runs:
            changes |= r ^ (r << 1)
        mask = -1
        for start in range(omega - n + 1):
            slots += 1
            if mask < 0 or (changes >> start) & 1:
                m = 0
                for e in range(n_edges):
                    if (runs[e] >> start) & 1:
                        m |= 1 << e
                mask = m
            res = cache.get(mask)
            if res is None:
                res = _dijkstra_core(adj, nv, s, t, edge_bits=mask)
                cache[mask] = res
            cost, path, peak = res
            if meter is not None:
                third = peak // 3
                meter.fold(third, 2 * third, 0)
            if cost is None or cost > ceiling:
                continue
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_slots = [(start, n, path)]
            elif cost == best_cost:
                best_slots.append((start, n, path))
    if counters is not None:
        counters["slots"] = slots
    if best_cost is None:
        return None
    req = modulation.required_units(n_base, best_cost, model)
    if policy is Policy.FIRST_FIT:
        start, _n, path = min(best_slots, key=lambda c: (c[0], c[1]))
    elif policy is Policy.BEST_FIT:
        start, _n, path = min(best_slots, key=lambda c: (c[1], c[0]))
    else:
        start, _n, path = best_slots[rng.randrange(len(best_slots))]
    return RouteResult(path, (start, start + req - 1), best_cost)


def brute_search(g, s, t, decide, required_units, policy=Policy.FIRST_FIT,
                 rng=None, meter=None):
    """Optimal route by exhaustive best-first path enumeration.

    States extend over any incident edge to an unvisited vertex and die
    when no remaining unit block passes the decision function at the
    extended cost.  The first state popped at the target is cheapest;
    the policy picks among its qualifying blocks and the required
    units are carved from the chosen one.
    """
    omega = g.omega
    if rng is None:
        rng = random.Random(0)
    pcode = (Policy.FIRST_FIT, Policy.BEST_FIT, Policy.RANDOM_FIT).index(policy)

    def tie_key(cost, units):
        if pcode == 0:
            for lo, hi in units:
                if decide(cost, lo, hi):
                    return lo
            return omega
        if pcode == 1:
            best = (omega, omega)
            for lo, hi in units:
                if decide(cost, lo, hi) and (hi - lo, lo) < best:
                    best = (hi - lo, lo)
            return best
        return rng.random()

    counter = itertools.count()
    heap = []
    full = spectrum.universe(omega)
    if any(decide(0, lo, hi) for lo, hi in full):
        heappush(heap, (0, tie_key(0, full), next(counter),
                        PathState(0, s, (), full, 1 << s)))
        if meter is not None:
            meter.add(1, 0, 2 * len(full))
    adj = g.adj
    au = g.au
    while heap:
        cost, _tk, _sq, st = heappop(heap)
        if meter is not None:
            meter.remove(1, 2 * len(st.edges), 2 * len(st.units))
        if st.vertex == t:
            req = required_units(cost)
            if pcode == 0:
                for lo, hi in st.units:
                    if decide(cost, lo, hi):
                        return RouteResult(st.edges, (lo, lo + req - 1), cost)
            if pcode == 1:
                _w, lo = min((hi - lo, lo) for lo, hi in st.units
                             if decide(cost, lo, hi))
                return RouteResult(st.edges, (lo, lo + req - 1), cost)
            quals = [(lo, hi) for lo, hi in st.units if decide(cost, lo, hi)]
            lo, hi = quals[rng.randrange(len(quals))]
            start = rng.randint(lo, hi - req + 1)
            return RouteResult(st.edges, (start, start + req - 1), cost)
        visited = st.visited
        for eid, w, ln in adj[st.vertex]:
            if (visited >> w) & 1:
                continue
            nunits = spectrum.intersect(st.units, au[eid])
            if not nunits:
                continue
            c2 = cost + ln
            for lo, hi in nunits:
                if decide(c2, lo, hi):
                    break
            else:
                continue
            ns = PathState(c2, w, st.edges + (eid,), nunits,
                           visited | (1 << w))
            heappush(heap, (c2, tie_key(c2, nunits), next(counter), ns))
            if meter is not None:
                meter.add(1, 2 * len(ns.edges), 2 * len(nunits))
    return None
