"""Spectrum-aware shortest path routing for elastic optical networks.

The core algorithm is a label-setting search whose labels carry both a
path cost and the contiguous spectrum still available along the path;
labels are kept when they are incomparable under the (cost, spectrum
inclusion) partial order.  Two independent optimal baselines (repeated
filtered-graph Dijkstra and exhaustive path search) and a dynamic
traffic simulator are included for verification and measurement.
"""

from .baselines import SlotSpec, brute_search, filter_graph, filtered_search
from .instrument import WordMeter
from .modulation import (INFEASIBLE, ModulationModel, calibrate_reach,
                         cost_limits, make_decide, make_required,
                         required_units)
from .netgraph import (GraphFormatError, Multigraph, classic_dijkstra,
                       compute_stats, gabriel_generate, load_graph,
                       save_graph)
from .routing import (Label, Policy, RouteResult, SearchState, label_better,
                      search)
from .simcore import (ALGORITHMS, Connection, CrossCheckError, DemandSpec,
                      PopulationReport, RunReport, SearchRecord,
                      TrafficConfig, aggregate, arrival_rate, draw_demand,
                      mean_shortest_hops, run_simulation)
from .spectrum import (EMPTY, SpectrumError, allocate, cu_incomparable,
                       cu_width, from_bits, from_units, intersect, release,
                       to_bits, universe, validate)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "Connection", "CrossCheckError", "DemandSpec", "EMPTY",
    "GraphFormatError", "INFEASIBLE", "Label", "ModulationModel",
    "Multigraph", "Policy", "PopulationReport", "RouteResult", "RunReport",
    "SearchRecord", "SearchState", "SlotSpec", "SpectrumError",
    "TrafficConfig", "WordMeter", "aggregate", "allocate", "arrival_rate",
    "brute_search", "calibrate_reach", "classic_dijkstra", "compute_stats",
    "cost_limits", "cu_incomparable", "cu_width", "draw_demand",
    "filter_graph", "filtered_search", "from_bits", "from_units",
    "gabriel_generate", "intersect", "label_better", "load_graph",
    "make_decide", "make_required", "mean_shortest_hops", "release",
    "required_units", "run_simulation", "save_graph", "search", "to_bits",
    "universe", "validate",
]
