"""Undirected multigraphs with per-edge spectrum state, plus generation,
classic shortest paths, statistics and a plain text file format."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from heapq import heappop, heappush

from . import spectrum
from .spectrum import UnitSet

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""


class Multigraph:
    """Undirected multigraph with integer edge lengths and per-edge
    available units.

    Edges are numbered 0.. in insertion order.  ``adj[v]`` holds
    ``(edge_id, other_vertex, length)`` triples; ``au[e]`` is the
    canonical UnitSet currently available on edge e.  Both are exposed
    for read access by the search algorithms; spectrum state should be
    changed only through allocate_cu / release_cu / set_available.
    """

    def __init__(self, n_vertices: int, omega: int):
        if n_vertices < 1:
            raise ValueError(f"need at least one vertex, got {n_vertices}")
        if omega < 1:
            raise ValueError(f"need at least one spectrum unit, got {omega}")
        self.n_vertices = n_vertices
        self.omega = omega
        self.edges: list[tuple[int, int, int]] = []  # (u, v, length)
        self.au: list[UnitSet] = []
        self.adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n_vertices)]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def add_edge(self, u: int, v: int, length: int) -> int:
        if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
            raise ValueError(f"edge ({u}, {v}) outside vertex range")
        if length < 1:
            raise ValueError(f"edge length must be positive, got {length}")
        eid = len(self.edges)
        self.edges.append((u, v, length))
        self.au.append(spectrum.universe(self.omega))
        self.adj[u].append((eid, v, length))
        if u != v:
            self.adj[v].append((eid, u, length))
        return eid

    def endpoints(self, eid: int) -> tuple[int, int]:
        u, v, _ = self.edges[eid]
        return u, v

    def length(self, eid: int) -> int:
        return self.edges[eid][2]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def available(self, eid: int) -> UnitSet:
        return self.au[eid]

    def set_available(self, eid: int, units: UnitSet) -> None:
        spectrum.validate(units)
        if units and (units[0][0] < 0 or units[-1][1] >= self.omega):
            raise spectrum.SpectrumError(
                f"units {units!r} outside universe of {self.omega}")
        self.au[eid] = tuple(units)

    def allocate_cu(self, eid: int, cu) -> None:
        self.au[eid] = spectrum.allocate(self.au[eid], cu)

    def release_cu(self, eid: int, cu) -> None:
        if cu[1] >= self.omega:
            raise ValueError(f"CU {cu!r} outside universe of {self.omega}")
        self.au[eid] = spectrum.release(self.au[eid], cu)

    def reset_spectrum(self) -> None:
        full = spectrum.universe(self.omega)
        self.au = [full] * self.edge_count

    def copy(self) -> "Multigraph":
        g = Multigraph(self.n_vertices, self.omega)
        for u, v, length in self.edges:
            g.add_edge(u, v, length)
        g.au = list(self.au)
        return g

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self.n_vertices == other.n_vertices
            and self.omega == other.omega
            and self.edges == other.edges
            and self.au == other.au
        )


# -- generation --------------------------------------------------------

def gabriel_generate(
    n_vertices: int,
    density: float = 1e-4,
    seed=0,
    omega: int = 160,
) -> tuple[Multigraph, list[tuple[float, float]]]:
    """Random Gabriel graph over uniform points in a square.

    The square has area ``n_vertices / density``.  Two points are
    joined iff no third point lies in the closed disk having their
    segment as diameter.  Edge lengths are Euclidean distances rounded
    to the nearest integer, at least 1.  Disconnected draws (possible
    only through degenerate point placements) are rejected and redrawn
    from the next substream of the seed.
    """
    if n_vertices < 2:
        raise ValueError(f"need at least two vertices, got {n_vertices}")
    if not density > 0:
        raise ValueError(f"density must be positive, got {density}")
    side = math.sqrt(n_vertices / density)
    attempt = 0
    while True:
        rng = random.Random(f"{seed}/gabriel/{attempt}")
        pts = [(rng.uniform(0, side), rng.uniform(0, side)) for _ in range(n_vertices)]
        edges = _gabriel_edges(pts)
        if _connected(n_vertices, edges):
            break
        log.warning("disconnected Gabriel draw (seed=%r attempt=%d), retrying",
                    seed, attempt)
        attempt += 1
    g = Multigraph(n_vertices, omega)
    for u, v, dist in edges:
        g.add_edge(u, v, max(1, int(dist + 0.5)))
    return g, pts


def _gabriel_edges(pts):
    n = len(pts)
    edges = []
    for u in range(n):
        xu, yu = pts[u]
        for v in range(u + 1, n):
            xv, yv = pts[v]
            d2 = (xu - xv) ** 2 + (yu - yv) ** 2
            ok = True
            for w in range(n):
                if w == u or w == v:
                    continue
                xw, yw = pts[w]
                if ((xw - xu) ** 2 + (yw - yu) ** 2
                        + (xw - xv) ** 2 + (yw - yv) ** 2) <= d2:
                    ok = False
                    break
            if ok:
                edges.append((u, v, math.sqrt(d2)))
    return edges


def _connected(n, edges):
    if n == 0:
        return True
    nbr = [[] for _ in range(n)]
    for u, v, _ in edges:
        nbr[u].append(v)
        nbr[v].append(u)
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in nbr[v]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                stack.append(w)
    return count == n


# -- classic shortest paths --------------------------------------------

def _dijkstra_core(adj, n_vertices, s, t, edge_bits=None):
    """Length-shortest path by vertex-labeling Dijkstra.

    Ties between equal-length routes prefer the lower arriving edge id.
    ``edge_bits`` restricts the walk to edges whose bit is set.  Returns
    ``(cost, path_edges, peak_words)`` with cost and path None when t is
    unreachable; peak_words is the high water mark of 3-word vertex
    labels plus 3-word queue entries.
    """
    dist = [-1] * n_vertices
    pred_e = [-1] * n_vertices
    pred_v = [-1] * n_vertices
    settled = bytearray(n_vertices)
    heap = [(0, -1, s)]
    dist[s] = 0
    labeled = 1
    in_heap = 1
    peak = 3 * 2
    found = False
    while heap:
        d, eid, v = heappop(heap)
        in_heap -= 1
        if settled[v]:
            continue
        settled[v] = 1
        if v == t:
            found = True
            break
        for e2, w, ln in adj[v]:
            if edge_bits is not None and not (edge_bits >> e2) & 1:
                continue
            if settled[w]:
                continue
            nd = d + ln
            dw = dist[w]
            if dw < 0 or nd < dw:
                if dw < 0:
                    labeled += 1
                dist[w] = nd
                pred_e[w] = e2
                pred_v[w] = v
                heappush(heap, (nd, e2, w))
                in_heap += 1
                cur = 3 * (labeled + in_heap)
                if cur > peak:
                    peak = cur
            elif nd == dw and e2 < pred_e[w]:
                pred_e[w] = e2
                pred_v[w] = v
    if not found:
        return None, None, peak
    path = []
    v = t
    while v != s:
        path.append(pred_e[v])
        v = pred_v[v]
    path.reverse()
    return dist[t], tuple(path), peak


def classic_dijkstra(g: Multigraph, s: int, t: int):
    """Shortest path from s to t by length; ``(path_edges, cost)`` or None."""
    cost, path, _ = _dijkstra_core(g.adj, g.n_vertices, s, t)
    if cost is None:
        return None
    return path, cost


def all_pairs_paths(g: Multigraph):
    """Yield ``(src, dst, length, hops)`` for every reachable ordered
    pair with src != dst, under the classic_dijkstra tie-break."""
    n = g.n_vertices
    adj = g.adj
    for s in range(n):
        dist = [-1] * n
        hops = [0] * n
        pred_e = [-1] * n
        settled = bytearray(n)
        heap = [(0, -1, s)]
        dist[s] = 0
        while heap:
            d, eid, v = heappop(heap)
            if settled[v]:
                continue
            settled[v] = 1
            for e2, w, ln in adj[v]:
                if settled[w]:
                    continue
                nd = d + ln
                dw = dist[w]
                if dw < 0 or nd < dw:
                    dist[w] = nd
                    hops[w] = hops[v] + 1
                    pred_e[w] = e2
                    heappush(heap, (nd, e2, w))
                elif nd == dw and e2 < pred_e[w]:
                    pred_e[w] = e2
                    hops[w] = hops[v] + 1
        for t in range(n):
            if t != s and dist[t] >= 0:
                yield s, t, dist[t], hops[t]


def longest_shortest_path(g: Multigraph) -> int:
    """Largest shortest-path length over all vertex pairs; the graph
    must be connected."""
    longest = 0
    pairs = 0
    for _, _, length, _ in all_pairs_paths(g):
        pairs += 1
        if length > longest:
            longest = length
    if pairs != g.n_vertices * (g.n_vertices - 1):
        raise ValueError("graph is not connected")
    return longest


# -- statistics ---------------------------------------------------------

@dataclass(frozen=True)
class StatSummary:
    minimum: float
    mean: float
    maximum: float
    variance: float


@dataclass(frozen=True)
class GraphStats:
    edge_count: int
    edge_length: StatSummary
    vertex_degree: StatSummary
    path_hops: StatSummary
    path_length: StatSummary


def _summary(values) -> StatSummary:
    vals = list(values)
    if not vals:
        raise ValueError("no values to summarize")
    n = len(vals)
    mean = sum(vals) / n
    var = sum((x - mean) ** 2 for x in vals) / n
    return StatSummary(min(vals), mean, max(vals), var)


def compute_stats(g: Multigraph) -> GraphStats:
    """Population statistics of edge lengths, vertex degrees and
    shortest-path hop counts and lengths (unreachable pairs skipped)."""
    sp = [(length, hops) for _, _, length, hops in all_pairs_paths(g)]
    return GraphStats(
        edge_count=g.edge_count,
        edge_length=_summary(ln for _, _, ln in g.edges),
        vertex_degree=_summary(g.degree(v) for v in range(g.n_vertices)),
        path_hops=_summary(h for _, h in sp),
        path_length=_summary(ln for ln, _ in sp),
    )


def stats_rows(st: GraphStats):
    """GraphStats flattened to ``(quantity, min, mean, max, variance)``
    rows for CSV output."""
    named = [
        ("edge_length", st.edge_length),
        ("vertex_degree", st.vertex_degree),
        ("path_hops", st.path_hops),
        ("path_length", st.path_length),
    ]
    return [(name, s.minimum, s.mean, s.maximum, s.variance) for name, s in named]


# -- file format ---------------------------------------------------------

def save_graph(g: Multigraph, path) -> None:
    """Write ``V E OMEGA`` then one ``u v length`` line per edge.

    Spectrum state is not persisted; loading yields full availability.
    """
    with open(path, "w") as f:
        f.write(f"{g.n_vertices} {g.edge_count} {g.omega}\n")
        for u, v, length in g.edges:
            f.write(f"{u} {v} {length}\n")


def load_graph(path) -> Multigraph:
    with open(path) as f:
        head = f.readline()
        parts = head.split()
        if len(parts) != 3:
            raise GraphFormatError(f"{path}:1: expected 'V E OMEGA', got {head!r}")
        try:
            n, m, omega = (int(x) for x in parts)
        except ValueError:
            raise GraphFormatError(f"{path}:1: non-integer header {head!r}") from None
        try:
            g = Multigraph(n, omega)
        except ValueError as exc:
            raise GraphFormatError(f"{path}:1: {exc}") from None
        for lineno in range(2, m + 2):
            line = f.readline()
            if not line:
                raise GraphFormatError(f"{path}:{lineno}: expected {m} edges")
            parts = line.split()
            if len(parts) != 3:
                raise GraphFormatError(f"{path}:{lineno}: expected 'u v length'")
            try:
                u, v, length = (int(x) for x in parts)
                g.add_edge(u, v, length)
            except ValueError as exc:
                raise GraphFormatError(f"{path}:{lineno}: {exc}") from None
        tail = f.read().strip()
        if tail:
            raise GraphFormatError(f"{path}: trailing data after {m} edges")
    return g
