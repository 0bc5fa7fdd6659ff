#pragma once

#include "forge/half_edge_graph.hpp"

namespace forge {

// Two vertices joined by d parallel edges; the base of all gluing-graph
// covers. Darts 2i at vertex 0, 2i+1 at vertex 1.
HalfEdgeGraph theta_graph(int d);

HalfEdgeGraph path_graph(int n);
HalfEdgeGraph cycle_graph(int n);
HalfEdgeGraph complete_graph(int n);
HalfEdgeGraph petersen_graph();
HalfEdgeGraph single_loop_graph();

// Named lookup used by the CLI: "theta:3", "petersen", "cycle:5",
// "path:3", "complete:5", "loop".
HalfEdgeGraph graph_by_name(const std::string& name);

} // namespace forge
