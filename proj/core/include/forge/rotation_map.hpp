#pragma once

#include <string>
#include <vector>

#include "forge/half_edge_graph.hpp"

namespace forge {

// Oriented combinatorial map: a half-edge graph plus a rotation, the
// counterclockwise cyclic successor within each star. Faces are the orbits
// of d -> next(theta(d)).
class RotationMap {
public:
    RotationMap() = default;
    RotationMap(HalfEdgeGraph graph, std::vector<Dart> next_at_vertex);

    const HalfEdgeGraph& graph() const { return graph_; }
    Dart next(Dart d) const { return next_[d]; }
    Dart prev(Dart d) const { return prev_[d]; }
    const std::vector<Dart>& rotation() const { return next_; }

    // Face tracing permutation.
    Dart face_step(Dart d) const { return next_[graph_.theta(d)]; }

    // Orbit partition of darts under face tracing, each orbit starting at
    // its minimal dart, orbits sorted by that dart.
    const std::vector<std::vector<Dart>>& faces() const { return faces_; }
    int face_of(Dart d) const { return face_of_[d]; }

    std::string to_json() const;
    static RotationMap from_json(const std::string& text);

private:
    HalfEdgeGraph graph_;
    std::vector<Dart> next_;
    std::vector<Dart> prev_;
    std::vector<std::vector<Dart>> faces_;
    std::vector<int> face_of_;
};

struct MapType {
    int p = 0; // common face length
    int q = 0; // common valence
};

// Throws NotUniformType when faces or valences vary.
MapType map_type(const RotationMap& m);

// Genus of the underlying closed oriented surface, from V - E + F.
int map_genus(const RotationMap& m);

struct MapGirth {
    int girth = 0;
    bool equals_face_length = false; // the hypothesis girth == p
};
MapGirth map_girth(const RotationMap& m);

// A flag is a mutually incident (vertex, edge, face) triple, encoded as a
// dart plus a side: side 0 is the face of the dart, side 1 the face of its
// theta partner. There are 4E flags.
struct FlagTransitivity {
    bool verdict = false;
    int orbit_count = 0;
    unsigned long long map_automorphism_count = 0;
};

// Map-automorphisms are graph automorphisms conjugating the rotation to
// itself (orientation-preserving) or to its inverse (orientation-
// reversing); reflections count, matching automorphisms realized by
// surface homeomorphisms. The group acts on flags; flag-transitive means
// one orbit.
FlagTransitivity is_flag_transitive(const RotationMap& m);

// Dual map: same darts and theta, rotation = face tracing. Swaps V and F,
// preserves genus.
RotationMap dual_map(const RotationMap& m);

// Build an oriented map from faces given as vertex cycles with consistent
// orientation (each directed edge used exactly once overall). Only for
// loopless graphs without parallel edges.
RotationMap map_from_oriented_faces(int vertex_count,
                                    const std::vector<std::vector<Vertex>>& faces);

// Catalog: tetrahedron, cube, octahedron, dodecahedron, icosahedron,
// beach_ball (param q), theta_map (param d), torus_grid (param n).
RotationMap catalog_map(const std::string& name, int param = 0);

} // namespace forge
