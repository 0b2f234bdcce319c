"""Label-setting shortest paths over contiguous spectrum units.

Classic Dijkstra keeps one best label per vertex.  Here a label also
carries the contiguous units (CU) still usable along its path, and a
label is better than another only if it costs no more AND offers a
superset of its units.  Labels incomparable under that order must all
be kept, so every vertex holds a set of tentative and a set of
permanent labels, and a vertex can be visited again for units not
covered by earlier visits.  Loops never pay: revisiting a vertex can
only shrink the units and grow the cost.

The search is exact for any decision function that is monotone in the
label order (if a label passes, any better label passes too).
"""

from __future__ import annotations

import random
from enum import Enum
from heapq import heappop, heappush
from typing import NamedTuple

from .spectrum import CU

NULL_EDGE = -1


class Policy(Enum):
    """Spectrum allocation policy: which units win among equal costs."""

    FIRST_FIT = "first-fit"
    BEST_FIT = "best-fit"
    RANDOM_FIT = "random-fit"


class Label(NamedTuple):
    """One candidate way of reaching a vertex.

    ``edge`` is the arriving edge (NULL_EDGE for the boot label at the
    source) and ``pred`` the identifier of the predecessor label.
    """

    cost: int
    cu: CU
    edge: int = NULL_EDGE
    pred: int | None = None


class RouteResult(NamedTuple):
    path: tuple[int, ...]
    cu: CU
    cost: int


def label_better(a: Label, b: Label) -> bool:
    """Strict partial order on labels.

    ``a`` beats ``b`` iff it costs no more and its CU covers b's CU,
    with at least one of the two relations strict.  Equal labels and
    labels trading cost against units are not ordered.
    """
    alo, ahi = a.cu
    blo, bhi = b.cu
    if alo > blo or ahi < bhi:
        return False
    if a.cost < b.cost:
        return True
    return a.cost == b.cost and (alo < blo or ahi > bhi)


def insert_incomparable(labels, cand: Label):
    """Insert ``cand`` into a pairwise-incomparable label collection.

    Returns ``(updated_list, inserted)``.  Nothing changes when some
    member is better than ``cand`` or holds identical cost, units and
    edge; otherwise members beaten by ``cand`` are dropped and ``cand``
    is appended.
    """
    for m in labels:
        if label_better(m, cand):
            return list(labels), False
        if m.cost == cand.cost and m.cu == cand.cu and m.edge == cand.edge:
            return list(labels), False
    kept = [m for m in labels if not label_better(cand, m)]
    kept.append(cand)
    return kept, True


class SearchState:
    """Queues, label sets and bookkeeping of one search.

    ``decide(cost, lo, hi)`` accepts or rejects a candidate label;
    ``required_units(cost)`` gives the units to carve out of the
    winning label's CU.  ``decide`` must be monotone: widening the CU
    or lowering the cost never turns acceptance into rejection.

    The queue pops the globally cheapest tentative label; among equal
    costs the allocation policy picks the preferred units, and the
    lowest edge id settles what remains.  Exposed so tests and callers
    can single-step the search and inspect per-vertex label sets.
    """

    def __init__(self, graph, source, target, decide, required_units,
                 policy=Policy.FIRST_FIT, rng=None, meter=None,
                 count_archive=False):
        n = graph.n_vertices
        if not (0 <= source < n and 0 <= target < n):
            raise ValueError(f"endpoints ({source}, {target}) outside vertex range")
        self.graph = graph
        self.source = source
        self.target = target
        self.decide = decide
        self.required_units = required_units
        self.policy = policy
        self.rng = rng if rng is not None else random.Random(0)
        self.meter = meter
        self.count_archive = count_archive
        self.done = False
        self._labels = []           # (cost, lo, hi, edge, vertex, pred)
        self._alive = []            # tentative liveness, indexed like _labels
        self._tent = [[] for _ in range(n)]
        self._perm = [[] for _ in range(n)]
        self._heap = []
        self._pcode = (Policy.FIRST_FIT, Policy.BEST_FIT,
                       Policy.RANDOM_FIT).index(policy)
        self._push((0, 0, graph.omega - 1, NULL_EDGE, source, -1))

    def _push(self, rec):
        lid = len(self._labels)
        self._labels.append(rec)
        self._alive.append(True)
        self._tent[rec[4]].append(lid)
        cost, lo, hi = rec[0], rec[1], rec[2]
        if self._pcode == 0:
            entry = (cost, lo, lo - hi, rec[3], lid)
        elif self._pcode == 1:
            entry = (cost, hi - lo, lo, rec[3], lid)
        else:
            entry = (cost, self.rng.random(), rec[3], lid)
        heappush(self._heap, entry)
        if self.meter is not None:
            self.meter.add(1, 2, 2)
        return lid

    def step(self):
        """Settle the cheapest tentative label and relax its edges.

        Returns the visited vertex, or None once the queue is empty.
        Reaching the target sets ``done`` and skips the relaxations.
        """
        heap = self._heap
        alive = self._alive
        while heap:
            lid = heappop(heap)[-1]
            if alive[lid]:
                break
        else:
            return None
        alive[lid] = False
        v = self._labels[lid][4]
        self._tent[v].remove(lid)
        self._perm[v].append(lid)
        if v == self.target:
            self.done = True
            return v
        for eid, _w, _ln in self.graph.adj[v]:
            self.relax(eid, lid)
        return v

    def relax(self, eid, lid):
        """Extend a settled label over one incident edge.

        Every maximal contiguous block shared by the label and the
        edge yields a candidate at the far endpoint; a candidate is
        queued unless the decision function rejects it or some existing
        label there is at least as good, and queued labels it beats are
        dropped.
        """
        labels = self._labels
        cost, lo, hi, _e, v, _p = labels[lid]
        eu, ev, ln = self.graph.edges[eid]
        w = ev if eu == v else eu
        c2 = cost + ln
        decide = self.decide
        perm_w = self._perm[w]
        meter = self.meter
        drop_words = meter is not None and not self.count_archive
        for alo, ahi in self.graph.au[eid]:
            if ahi < lo:
                continue
            if alo > hi:
                break
            clo = alo if alo > lo else lo
            chi = ahi if ahi < hi else hi
            if not decide(c2, clo, chi):
                continue
            blocked = False
            for pid in perm_w:
                pc, plo, phi, pe, _pv, _pp = labels[pid]
                if plo <= clo and chi <= phi:
                    if (pc < c2
                            or (pc == c2 and (plo < clo or phi > chi))
                            or (pc == c2 and plo == clo and phi == chi
                                and pe == eid)):
                        blocked = True
                        break
            if blocked:
                continue
            tent_w = self._tent[w]
            for qid in tent_w:
                qc, qlo, qhi, qe, _qv, _qp = labels[qid]
                if qlo <= clo and chi <= qhi:
                    if (qc < c2
                            or (qc == c2 and (qlo < clo or qhi > chi))
                            or (qc == c2 and qlo == clo and qhi == chi
                                and qe == eid)):
                        blocked = True
                        break
            if blocked:
                continue
            keep = []
            alive = self._alive
            for qid in tent_w:
                qc, qlo, qhi, _qe, _qv, _qp = labels[qid]
                if clo <= qlo and qhi <= chi and (
                        c2 < qc or (c2 == qc and (clo < qlo or chi > qhi))):
                    alive[qid] = False
                    if drop_words:
                        meter.remove(1, 2, 2)
                else:
                    keep.append(qid)
            if len(keep) != len(tent_w):
                self._tent[w] = keep
            self._push((c2, clo, chi, eid, w, lid))

    def trace(self):
        """Route from the best qualifying permanent label at the target.

        The policy that steers queue pops also picks among qualifying
        labels of equal cost here, and picks where inside the final CU
        the required units are carved (lowest position, except a random
        position under RANDOM_FIT).  None if no label qualifies.
        """
        labels = self._labels
        best = best_key = need = None
        for lid in self._perm[self.target]:
            cost, lo, hi, eid, _v, _p = labels[lid]
            req = self.required_units(cost)
            if hi - lo + 1 < req:
                continue
            if self._pcode == 0:
                key = (cost, lo, lo - hi, eid)
            elif self._pcode == 1:
                key = (cost, hi - lo, lo, eid)
            else:
                key = (cost, self.rng.random(), eid)
            if best_key is None or key < best_key:
                best, best_key, need = lid, key, req
        if best is None:
            return None
        cost, lo, hi, _e, _v, _p = labels[best]
        if self._pcode == 2:
            start = self.rng.randint(lo, hi - need + 1)
        else:
            start = lo
        path = []
        lid = best
        while labels[lid][3] != NULL_EDGE:
            path.append(labels[lid][3])
            lid = labels[lid][5]
        path.reverse()
        return RouteResult(tuple(path), (start, start + need - 1), cost)

    def run(self):
        while not self.done and self.step() is not None:
            pass
        return self.trace()

    def tentative(self, v):
        """Live queued labels of vertex v, in insertion order."""
        return [self._public(lid) for lid in self._tent[v]]

    def permanent(self, v):
        """Settled labels of vertex v, in settlement order."""
        return [self._public(lid) for lid in self._perm[v]]

    def label_count(self):
        """Live labels: (tentative, permanent) totals."""
        tent = sum(len(x) for x in self._tent)
        perm = sum(len(x) for x in self._perm)
        return tent, perm

    def _public(self, lid):
        cost, lo, hi, eid, _v, pred = self._labels[lid]
        return Label(cost, (lo, hi), eid, pred if pred >= 0 else None)


def search(graph, source, target, decide, required_units,
           policy=Policy.FIRST_FIT, rng=None, meter=None,
           count_archive=False):
    """Cheapest route from source to target honoring the decision
    function; ``RouteResult`` or None when no route qualifies."""
    state = SearchState(graph, source, target, decide, required_units,
                        policy, rng, meter, count_archive)
    return state.run()
