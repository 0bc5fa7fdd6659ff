#include "forge/half_edge_graph.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"

namespace forge {

HalfEdgeGraph::HalfEdgeGraph(int vertex_count, std::vector<Dart> theta,
                             std::vector<Vertex> vertex_of)
    : vertex_count_(vertex_count), theta_(std::move(theta)), vertex_of_(std::move(vertex_of)) {
    require(theta_.size() == vertex_of_.size(), "BadGraph",
            "theta and vertex_of must have equal length");
    const int n = dart_count();
    for (Dart d = 0; d < n; ++d) {
        require(theta_[d] >= 0 && theta_[d] < n, "BadGraph", "theta out of range");
        require(theta_[d] != d, "BadGraph", "theta must be fixed-point-free");
        require(theta_[theta_[d]] == d, "BadGraph", "theta must be an involution");
        require(vertex_of_[d] >= 0 && vertex_of_[d] < vertex_count_, "BadGraph",
                "dart vertex out of range");
    }
    build_index();
}

void HalfEdgeGraph::build_index() {
    stars_.assign(vertex_count_, {});
    edges_.clear();
    edge_of_.assign(dart_count(), -1);
    for (Dart d = 0; d < dart_count(); ++d) {
        stars_[vertex_of_[d]].push_back(d);
        if (d < theta_[d]) edges_.emplace_back(d, theta_[d]);
    }
    for (int e = 0; e < edge_count(); ++e) {
        edge_of_[edges_[e].first] = e;
        edge_of_[edges_[e].second] = e;
    }
}

bool HalfEdgeGraph::is_connected() const {
    if (vertex_count_ == 0) return true;
    std::vector<char> seen(vertex_count_, 0);
    std::vector<Vertex> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        Vertex v = queue.back();
        queue.pop_back();
        for (Dart d : stars_[v]) {
            Vertex w = head(d);
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool HalfEdgeGraph::regular_valence(int* out) const {
    if (vertex_count_ == 0) return false;
    int d = valence(0);
    for (Vertex v = 1; v < vertex_count_; ++v)
        if (valence(v) != d) return false;
    if (out) *out = d;
    return true;
}

bool HalfEdgeGraph::operator==(const HalfEdgeGraph& other) const {
    return vertex_count_ == other.vertex_count_ && theta_ == other.theta_ &&
           vertex_of_ == other.vertex_of_ && vertex_labels_ == other.vertex_labels_ &&
           edge_labels_ == other.edge_labels_;
}

std::string HalfEdgeGraph::to_json() const {
    nlohmann::ordered_json j;
    j["vertices"] = vertex_count_;
    auto& darts = j["darts"] = nlohmann::ordered_json::array();
    for (Dart d = 0; d < dart_count(); ++d) darts.push_back({d, vertex_of_[d]});
    auto& th = j["theta"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : edges_) th.push_back({a, b});
    auto& vl = j["vertex_labels"] = nlohmann::ordered_json::object();
    for (const auto& [v, l] : vertex_labels_) vl[std::to_string(v)] = l;
    auto& el = j["edge_labels"] = nlohmann::ordered_json::object();
    for (const auto& [e, l] : edge_labels_) el[std::to_string(e)] = l;
    return j.dump(2);
}

HalfEdgeGraph HalfEdgeGraph::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("IoError", std::string("graph document is not valid JSON: ") + e.what());
    }
    require(j.contains("vertices") && j.contains("darts") && j.contains("theta"), "IoError",
            "graph document must contain vertices, darts, theta");
    int n_vertices = j["vertices"].get<int>();
    int n_darts = static_cast<int>(j["darts"].size());
    std::vector<Vertex> vertex_of(n_darts, -1);
    for (const auto& pair : j["darts"]) {
        int d = pair[0].get<int>();
        require(d >= 0 && d < n_darts, "IoError", "dart id out of range");
        vertex_of[d] = pair[1].get<int>();
    }
    std::vector<Dart> theta(n_darts, -1);
    for (const auto& pair : j["theta"]) {
        int a = pair[0].get<int>(), b = pair[1].get<int>();
        require(a >= 0 && a < n_darts && b >= 0 && b < n_darts, "IoError",
                "theta dart out of range");
        theta[a] = b;
        theta[b] = a;
    }
    for (Dart d = 0; d < n_darts; ++d)
        require(theta[d] >= 0 && vertex_of[d] >= 0, "IoError", "incomplete graph document");
    HalfEdgeGraph g(n_vertices, std::move(theta), std::move(vertex_of));
    if (j.contains("vertex_labels"))
        for (auto it = j["vertex_labels"].begin(); it != j["vertex_labels"].end(); ++it)
            g.set_vertex_label(std::stoi(it.key()), it.value().get<int>());
    if (j.contains("edge_labels"))
        for (auto it = j["edge_labels"].begin(); it != j["edge_labels"].end(); ++it)
            g.set_edge_label(std::stoi(it.key()), it.value().get<int>());
    return g;
}

std::string HalfEdgeGraph::to_dot(const std::string& name) const {
    std::ostringstream out;
    out << "graph " << name << " {\n";
    for (Vertex v = 0; v < vertex_count_; ++v) {
        out << "  " << v;
        auto it = vertex_labels_.find(v);
        if (it != vertex_labels_.end()) out << " [label=\"" << v << ":" << it->second << "\"]";
        out << ";\n";
    }
    for (int e = 0; e < edge_count(); ++e) {
        out << "  " << tail(edges_[e].first) << " -- " << head(edges_[e].first);
        auto it = edge_labels_.find(e);
        if (it != edge_labels_.end()) out << " [label=\"" << it->second << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

HalfEdgeGraph graph_from_edge_list(int vertex_count,
                                   const std::vector<std::pair<Vertex, Vertex>>& edges) {
    std::vector<Dart> theta(2 * edges.size());
    std::vector<Vertex> vertex_of(2 * edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
        theta[2 * e] = static_cast<Dart>(2 * e + 1);
        theta[2 * e + 1] = static_cast<Dart>(2 * e);
        vertex_of[2 * e] = edges[e].first;
        vertex_of[2 * e + 1] = edges[e].second;
    }
    return HalfEdgeGraph(vertex_count, std::move(theta), std::move(vertex_of));
}

} // namespace forge
