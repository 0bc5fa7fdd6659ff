#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/automorphism.hpp"
#include "forge/half_edge_graph.hpp"

namespace forge {

// Dart-level graph morphism certifying a covering: commutes with both
// theta involutions, induces a vertex map, and restricts to a bijection
// on every star. All fibers have the same size (the degree).
struct CoveringMap {
    HalfEdgeGraph total;
    HalfEdgeGraph base;
    std::vector<Dart> dart_map; // total dart -> base dart
    int degree = 0;

    Vertex vertex_image(Vertex total_vertex) const;
    // Vertices of total over a base vertex, ascending.
    std::vector<Vertex> fiber(Vertex base_vertex) const;
    // The unique dart of star(total_vertex) over the given base dart.
    Dart dart_over(Vertex total_vertex, Dart base_dart) const;

    void validate() const; // throws BadCover on violation

    std::string to_json() const;
    static CoveringMap from_json(const std::string& text);
};

CoveringMap identity_cover(const HalfEdgeGraph& g);
CoveringMap compose_covers(const CoveringMap& upper, const CoveringMap& lower); // upper: T->M, lower: M->B

struct Mod2Cover {
    CoveringMap cover;
    int rank = 0;                       // E - V + 1
    std::vector<uint32_t> edge_voltage; // GF(2)^rank voltage per base edge
};

// The mod-2 homology cover: fix a BFS spanning tree, give non-tree edge i
// the voltage bit i, and take the associated GF(2)^rank voltage cover.
// Total vertex (v, x) gets id v * 2^rank + x, dart (d, x) id d * 2^rank + x.
// The kernel is characteristic, so the cover is normal and every base
// automorphism lifts.
Mod2Cover mod2_homology_cover(const HalfEdgeGraph& g, long long max_total_vertices = 1000000);

// Lift of a base automorphism through the cover; deterministic choice:
// the basepoint (total vertex 0) goes to the first fiber vertex for which
// propagation is consistent. Throws NotLiftable if no choice works.
GraphAutomorphism lift_automorphism(const CoveringMap& c, const GraphAutomorphism& psi);
// Same, but force the image of total vertex `from` to be `to`.
std::optional<GraphAutomorphism> lift_automorphism_pinned(const CoveringMap& c,
                                                          const GraphAutomorphism& psi,
                                                          Vertex from, Vertex to);

// All lifts of the identity. For a normal cover they act transitively on
// each fiber and there are exactly `degree` of them.
std::vector<GraphAutomorphism> deck_transformations(const CoveringMap& c);

// Walk lifting: start at a total vertex over the walk's first tail; returns
// the lifted dart sequence, or nothing if the start is not over the tail.
std::optional<std::vector<Dart>> lift_walk(const CoveringMap& c, Vertex start,
                                           const std::vector<Dart>& base_walk);

struct CertificateClause {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct DoublingCertificate {
    std::vector<CertificateClause> clauses;
    bool passed = false;
    int base_girth = 0;
    int total_girth = 0;

    std::string to_json() const;
};

// Checks the three properties the girth-doubling construction must
// deliver: (a) girth doubled, (b) every girth cycle upstairs projects to a
// girth cycle downstairs traversed exactly twice, (c) strict polygonality
// and isotropy are inherited. Isotropy of the total graph is certified
// constructively through deck transitivity and lifted automorphisms, which
// stays cheap at sizes where the generic search would not.
DoublingCertificate evaluate_girth_doubling(const CoveringMap& c);
// Same, but throws CertificationFailed naming the violated clause.
DoublingCertificate certify_girth_doubling(const CoveringMap& c);

// Gluing graph with the vertex signs and edge colors pulled back from the
// two-vertex theta graph through a covering.
struct ColoredGluingGraph {
    HalfEdgeGraph graph;
    std::vector<int> vertex_sign; // +1 / -1 per vertex (sigma after projection)
    std::vector<int> edge_color;  // 1..d per edge (chi after projection)
    CoveringMap theta_cover;
    int d = 0;

    void validate() const; // proper colorings + factorization through the cover
};

// Pulls sigma (vertex 0 -> +1) and chi (edge i -> color i+1) of the base
// theta graph back through the cover. Throws BaseNotTheta.
ColoredGluingGraph make_colored_gluing_graph(const CoveringMap& c);

// Rebuilds the covering onto the theta graph from a labeled graph
// (vertex labels +-1, edge labels 1..d) and validates the colorings.
ColoredGluingGraph colored_gluing_from_labeled_graph(const HalfEdgeGraph& g);

} // namespace forge
