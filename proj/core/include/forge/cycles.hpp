#pragma once

#include <vector>

#include "forge/half_edge_graph.hpp"

namespace forge {

// A non-trivial cycle as a closed dart sequence: head(d_i) == tail(d_{i+1})
// cyclically and no backtrack (d_{i+1} != theta(d_i)). Stored in canonical
// form: the lexicographic minimum over all rotations of the sequence and
// of its reversal (reversal flips every dart through theta).
struct Cycle {
    std::vector<Dart> darts;

    int length() const { return static_cast<int>(darts.size()); }
    bool operator==(const Cycle& other) const { return darts == other.darts; }
    bool operator<(const Cycle& other) const { return darts < other.darts; }
};

// Canonicalize an arbitrary closed dart sequence.
Cycle canonical_cycle(const HalfEdgeGraph& g, std::vector<Dart> darts);

bool is_closed_dart_walk(const HalfEdgeGraph& g, const std::vector<Dart>& darts);
bool is_backtrack_free(const HalfEdgeGraph& g, const std::vector<Dart>& darts);

struct GirthResult {
    int length = 0;
    std::vector<Cycle> witnesses; // all girth cycles, canonical, sorted
};

// Girth by per-edge BFS (loops give 1, parallel edges 2), then an
// exhaustive embedded-cycle enumeration at the girth length for the
// witness list. Throws NoCycle on forests and TooLarge past the cap.
GirthResult girth(const HalfEdgeGraph& g);

// BFS girth length only (no witnesses); the cheap half of the pair.
int girth_length(const HalfEdgeGraph& g);

// Test oracle: all embedded cycles of length <= max_len by brute DFS.
std::vector<Cycle> enumerate_embedded_cycles(const HalfEdgeGraph& g, int max_len);

inline constexpr int kGirthCap = 64;

// Backtrack-free loop-free 2-dart walks, canonicalized under reversal.
// The two endpoints may coincide when parallel edges allow it (theta
// graphs); the middle vertex is always distinct from both.
std::vector<std::pair<Dart, Dart>> embedded_two_paths(const HalfEdgeGraph& g);

struct StrictPolygonalResult {
    bool verdict = false;
    // On failure: a violating 2-path and how many girth cycles contain it.
    std::pair<Dart, Dart> witness{-1, -1};
    int witness_cycle_count = 0;
};

// Strict polygonal: every embedded 2-path lies in exactly one girth cycle.
StrictPolygonalResult is_strict_polygonal(const HalfEdgeGraph& g);

// Number of girth cycles containing each 2-path (same order as
// embedded_two_paths). Exposed for the covers certificates.
std::vector<int> two_path_girth_cycle_counts(const HalfEdgeGraph& g,
                                             const std::vector<std::pair<Dart, Dart>>& paths,
                                             const std::vector<Cycle>& girth_cycles);

} // namespace forge
