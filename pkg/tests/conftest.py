import pytest

from eonsim.netgraph import Multigraph


@pytest.fixture
def parallel_edge_graph():
    """Three vertices, two parallel edges 0-1 plus one edge 1-2.

    Spectrum (omega = 4):
      edge 0: 0-1, length 1,  free (1, 2)
      edge 1: 0-1, length 2,  free (1, 3)
      edge 2: 1-2, length 10, free (2, 3)

    A 2-unit demand 0->2 must take the longer parallel edge (cost 12),
    a 1-unit demand can take the shorter one (cost 11).
    """
    g = Multigraph(3, 4)
    g.add_edge(0, 1, 1)
    g.set_available(0, ((1, 2),))
    g.add_edge(0, 1, 2)
    g.set_available(1, ((1, 3),))
    g.add_edge(1, 2, 10)
    g.set_available(2, ((2, 3),))
    return g


@pytest.fixture
def dominance_graph():
    """Three vertices where settling the source leaves exactly one
    incomparable tentative label at vertex 1 (omega = 4).

      edge 0: 0-1, length 1, free (1, 2)
      edge 1: 0-1, length 2, free (2, 3)
      edge 2: 0-1, length 1, free (1, 3)
      edge 3: 1-2, length 1, free (1, 3)

    The label over edge 2 has the same cost as the one over edge 0 but
    strictly wider spectrum, and lower cost than the one over edge 1
    with no narrower spectrum, so it supersedes both.
    """
    g = Multigraph(3, 4)
    g.add_edge(0, 1, 1)
    g.set_available(0, ((1, 2),))
    g.add_edge(0, 1, 2)
    g.set_available(1, ((2, 3),))
    g.add_edge(0, 1, 1)
    g.set_available(2, ((1, 3),))
    g.add_edge(1, 2, 1)
    g.set_available(3, ((1, 3),))
    return g


@pytest.fixture
def two_hop_graph():
    """Path graph 0-1-2 with lengths 1 and 2, full spectrum of 8."""
    g = Multigraph(3, 8)
    g.add_edge(0, 1, 1)
    g.add_edge(1, 2, 2)
    return g
