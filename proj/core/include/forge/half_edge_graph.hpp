#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace forge {

using Dart = int;
using Vertex = int;

// Multigraph as darts (half-edges) with a fixed-point-free involution
// pairing darts into edges. Loops and parallel edges are first-class,
// which an adjacency matrix cannot express.
//
// An edge is a theta-orbit {d, theta(d)}; edges are indexed by the
// position of their canonical dart (the smaller one) in ascending order.
// A dart d is read as the oriented edge tail(d) -> head(d).
class HalfEdgeGraph {
public:
    HalfEdgeGraph() = default;

    // theta[d] = partner dart, vertex_of[d] = tail vertex.
    HalfEdgeGraph(int vertex_count, std::vector<Dart> theta, std::vector<Vertex> vertex_of);

    int vertex_count() const { return vertex_count_; }
    int dart_count() const { return static_cast<int>(theta_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    Dart theta(Dart d) const { return theta_[d]; }
    Vertex tail(Dart d) const { return vertex_of_[d]; }
    Vertex head(Dart d) const { return vertex_of_[theta_[d]]; }

    bool is_loop(Dart d) const { return tail(d) == head(d); }

    // Edge index of the dart's theta-orbit.
    int edge_of(Dart d) const { return edge_of_[d]; }
    // The two darts of edge e, canonical (smaller) dart first.
    std::pair<Dart, Dart> edge_darts(int e) const { return edges_[e]; }

    // Darts at v, ascending.
    const std::vector<Dart>& star(Vertex v) const { return stars_[v]; }
    int valence(Vertex v) const { return static_cast<int>(stars_[v].size()); }

    bool is_connected() const;
    bool regular_valence(int* out = nullptr) const;

    // Optional integer labels; empty maps mean unlabeled.
    const std::map<Vertex, int>& vertex_labels() const { return vertex_labels_; }
    const std::map<int, int>& edge_labels() const { return edge_labels_; }
    void set_vertex_label(Vertex v, int label) { vertex_labels_[v] = label; }
    void set_edge_label(int edge, int label) { edge_labels_[edge] = label; }

    bool operator==(const HalfEdgeGraph& other) const;

    // Graph document format; keys and array orders are fixed so output
    // is byte-stable.
    std::string to_json() const;
    static HalfEdgeGraph from_json(const std::string& text);

    // Graphviz text; edge labels become edge label attributes.
    std::string to_dot(const std::string& name = "G") const;

private:
    void build_index();

    int vertex_count_ = 0;
    std::vector<Dart> theta_;
    std::vector<Vertex> vertex_of_;
    std::vector<std::vector<Dart>> stars_;
    std::vector<std::pair<Dart, Dart>> edges_;
    std::vector<int> edge_of_;
    std::map<Vertex, int> vertex_labels_;
    std::map<int, int> edge_labels_;
};

// Convenience builder: edges as (u, v) pairs; darts are numbered 2e, 2e+1
// with tail u, v respectively.
HalfEdgeGraph graph_from_edge_list(int vertex_count,
                                   const std::vector<std::pair<Vertex, Vertex>>& edges);

} // namespace forge
