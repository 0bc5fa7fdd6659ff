#pragma once

#include <optional>
#include <vector>

#include "forge/half_edge_graph.hpp"

namespace forge {

// Dart-level graph automorphism. The vertex permutation is the shadow of
// the dart permutation; both are stored because callers consume both.
struct GraphAutomorphism {
    std::vector<Vertex> vertex_perm;
    std::vector<Dart> dart_perm;

    bool operator==(const GraphAutomorphism& o) const { return dart_perm == o.dart_perm; }
    bool operator<(const GraphAutomorphism& o) const { return dart_perm < o.dart_perm; }
};

GraphAutomorphism identity_automorphism(const HalfEdgeGraph& g);
GraphAutomorphism compose(const GraphAutomorphism& f, const GraphAutomorphism& g); // f after g
GraphAutomorphism inverse(const GraphAutomorphism& f);

// Checks commutation with theta and vertex incidence (and labels when
// respect_labels is set).
bool is_graph_automorphism(const HalfEdgeGraph& g, const GraphAutomorphism& a,
                           bool respect_labels = false);

struct AutomorphismGroup {
    std::vector<GraphAutomorphism> generators; // sorted by vertex permutation
    unsigned long long order = 0;
};

// Full dart-level automorphism group: backtracking over vertex images with
// adjacency-multiset pruning, a kernel factor for parallel edges and
// loops, and the order cross-checked by a Schreier-Sims orbit-stabilizer
// chain over the generators.
AutomorphismGroup automorphism_group(const HalfEdgeGraph& g, bool respect_labels = false);

// All vertex permutations extending to automorphisms (the vertex shadow of
// the group), sorted. Useful for transitivity and stabilizer questions.
std::vector<std::vector<Vertex>> vertex_automorphisms(const HalfEdgeGraph& g,
                                                      bool respect_labels = false);

bool is_vertex_transitive(const HalfEdgeGraph& g);

struct IsotropyResult {
    bool verdict = false;
    // When false: either two inequivalent vertices (u, v) or a star
    // bijection at the representative vertex that extends to no
    // automorphism, given as dart image pairs.
    std::optional<std::pair<Vertex, Vertex>> inequivalent_vertices;
    std::optional<std::vector<std::pair<Dart, Dart>>> failing_injection;
};

// Isotropic = vertex transitive + locally symmetric. Local symmetry is
// checked at one orbit representative only; the rest follows by
// conjugation.
IsotropyResult is_isotropic(const HalfEdgeGraph& g);

// Order of the permutation group generated by the given dart
// permutations, via a deterministic Schreier-Sims chain.
unsigned long long permutation_group_order(int degree, const std::vector<std::vector<int>>& gens);

} // namespace forge
