#include "forge/graphs.hpp"

#include "forge/error.hpp"

namespace forge {

HalfEdgeGraph theta_graph(int d) {
    require(d >= 1, "BadGraph", "theta graph needs at least one edge");
    std::vector<std::pair<Vertex, Vertex>> edges(d, {0, 1});
    return graph_from_edge_list(2, edges);
}

HalfEdgeGraph path_graph(int n) {
    require(n >= 1, "BadGraph", "path needs at least one vertex");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return graph_from_edge_list(n, edges);
}

HalfEdgeGraph cycle_graph(int n) {
    require(n >= 1, "BadGraph", "cycle needs at least one vertex");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return graph_from_edge_list(n, edges);
}

HalfEdgeGraph complete_graph(int n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    return graph_from_edge_list(n, edges);
}

HalfEdgeGraph petersen_graph() {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i < 5; ++i) edges.push_back({i, (i + 1) % 5});     // outer pentagon
    for (int i = 0; i < 5; ++i) edges.push_back({5 + i, 5 + (i + 2) % 5}); // inner pentagram
    for (int i = 0; i < 5; ++i) edges.push_back({i, 5 + i});           // spokes
    return graph_from_edge_list(10, edges);
}

HalfEdgeGraph single_loop_graph() {
    return HalfEdgeGraph(1, {1, 0}, {0, 0});
}

HalfEdgeGraph graph_by_name(const std::string& name) {
    auto split = [&](const std::string& prefix, int* arg) {
        if (name.rfind(prefix + ":", 0) != 0) return false;
        *arg = std::stoi(name.substr(prefix.size() + 1));
        return true;
    };
    int k = 0;
    if (split("theta", &k)) return theta_graph(k);
    if (split("path", &k)) return path_graph(k);
    if (split("cycle", &k)) return cycle_graph(k);
    if (split("complete", &k)) return complete_graph(k);
    if (name == "petersen") return petersen_graph();
    if (name == "loop") return single_loop_graph();
    fail("UnknownName", "no graph named '" + name + "'");
}

} // namespace forge
