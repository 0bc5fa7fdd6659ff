#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/block.hpp"
#include "forge/covering.hpp"
#include "forge/hyperbolic.hpp"

namespace forge {

// One red gluing: the circle identification between boundary bdry_u of the
// block copy at G-vertex u and boundary bdry_w at w. pos_map sends slot m
// of the first circle to a slot of the second and must be a circle
// isomorphism (rotation or reflection of indices). corner_map sends the
// boundary corner between slots t-1 and t to its image corner; when left
// empty it is derived from pos_map, except for two-slot circles where both
// resolutions are consistent and the map must be given.
struct RedGluing {
    int g_edge = -1;
    Vertex block_u = -1, block_w = -1;
    int bdry_u = -1, bdry_w = -1;
    std::vector<int> pos_map;
    std::vector<int> corner_map;
};

struct CurveRef {
    bool red = true;
    int index = 0;
};

struct Curve {
    bool red = true;
    std::vector<int> x_sides; // cyclic, canonical (min rotation/reversal)
};

struct CurveSystem {
    std::vector<Curve> red_curves;  // red curve i <-> gluing-graph edge i
    std::vector<Curve> blue_curves; // sorted by side sequence
    int arcs_per_curve = 0;         // p
};

// The closed surface: copies of one block indexed by the gluing graph's
// vertices, blue sides glued within blocks, red boundaries glued across.
//
// Tile instances are v*|V(M)| + u; side and corner instances are
// tile*2q + local. Every corner instance has a blue mate (within its
// block) and a red mate (across its red gluing); the alternating orbit of
// any corner has exactly four corners, one tiling vertex of total angle
// 2*pi.
class AssembledSurface {
public:
    // Framework assembly along a colored gluing graph: edge of color j
    // glues the j-th boundaries by the identity. Throws ValenceMismatch /
    // ColoringImproper.
    AssembledSurface(Block block, ColoredGluingGraph coloring);
    // Bespoke gluing, trusted by the caller (the K5 construction).
    AssembledSurface(Block block, HalfEdgeGraph gluing_graph, std::vector<RedGluing> gluings);

    const Block& block() const { return block_; }
    const HalfEdgeGraph& gluing_graph() const { return G_; }
    const std::optional<ColoredGluingGraph>& coloring() const { return coloring_; }
    bool bespoke() const { return !coloring_.has_value(); }

    int tile_count() const { return G_.vertex_count() * block_.tiles(); }
    int slots_per_tile() const { return 2 * block_.q; }
    int instance_count() const { return tile_count() * slots_per_tile(); }

    int tile_instance(Vertex g_vertex, Vertex m_vertex) const {
        return g_vertex * block_.tiles() + m_vertex;
    }
    Vertex block_of_tile(int tile) const { return tile / block_.tiles(); }
    Vertex map_vertex_of_tile(int tile) const { return tile % block_.tiles(); }

    // Corner instance mates.
    int corner_blue_mate(int corner) const;
    int corner_red_mate(int corner) const { return red_mate_[corner]; }

    // X-sides: blue side (v, map edge a) gets id v*|E(M)| + a; red side
    // (gluing edge e, slot m) gets id blue_count + e*p + m.
    int x_side_count() const { return blue_side_count() + red_side_count(); }
    int blue_side_count() const { return G_.vertex_count() * block_.map.graph().edge_count(); }
    int red_side_count() const { return G_.edge_count() * block_.p; }
    int x_side_of_instance(int side_instance) const { return side_x_[side_instance]; }
    const std::array<int, 2>& instances_of_x_side(int x) const { return x_instances_[x]; }
    bool x_side_is_red(int x) const { return x >= blue_side_count(); }

    // Corner points (orbits of size four).
    int corner_point_count() const { return static_cast<int>(corner_points_.size()); }
    int corner_point_of(int corner) const { return corner_point_[corner]; }
    const std::array<int, 4>& corner_point_members(int point) const {
        return corner_points_[point];
    }

    // Curves; traced lazily, then cached. Throws BlueCurveDoesNotClose.
    const CurveSystem& curves() const;
    // Curve index per X-side.
    int curve_of_x_side(int x) const;

    std::string to_json() const;

private:
    void build();
    void check_orientability();
    void trace() const;

    Block block_;
    HalfEdgeGraph G_;
    std::optional<ColoredGluingGraph> coloring_;
    std::vector<RedGluing> gluings_;

    std::vector<int> red_mate_;               // corner instance -> corner instance
    std::vector<int> side_x_;                 // side instance -> x side id
    std::vector<std::array<int, 2>> x_instances_;
    std::vector<int> corner_point_;
    std::vector<std::array<int, 4>> corner_points_;

    mutable std::optional<CurveSystem> curves_;
    mutable std::vector<int> curve_of_side_; // x side -> curve index (red: edge, blue: sorted)
};

AssembledSurface assemble(const Block& b, const ColoredGluingGraph& g);

// Genus from the Euler characteristic of the quadrilateral tiling; must
// match the closed form 1 + |V(G)|*|V(M)|*(q-2)/4 or FormulaMismatch.
int genus(const AssembledSurface& x);

// The closed-form systole count 4q/((q-2)p) * (g-1); must equal the traced
// red + blue curve count or FormulaMismatch.
int systole_count(const AssembledSurface& x);

// Develops the flank tiles of a traced curve in the hyperboloid model and
// returns the translation length of the holonomy.
double holonomy_length(const AssembledSurface& x, const CurveRef& curve, double theta);

struct SystoleCertificateClause {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SystoleCertificate {
    std::vector<SystoleCertificateClause> clauses;
    bool passed = false;
    double min_enumerated_length = 0;
    double expected_length = 0; // p * L
    std::string to_json() const;
};

// Hypotheses consumed by the systole identification: map girth == p,
// gluing girth == p, strict polygonality with girth cycles over bigons
// (framework; bespoke gluings record direct closure instead), the polygon
// distance margins, and a bounded brute-force oracle: every closed
// transverse class crossing at most p tiles has hyperbolic holonomy
// length >= pL - 1e-6.
SystoleCertificate evaluate_systoles(const AssembledSurface& x);
SystoleCertificate certify_systoles(const AssembledSurface& x); // throws HypothesisFailed

struct TransitivityReport {
    bool quad_transitive = false;
    bool triangle_transitive = false;
    int quad_orbits = 0;
    int triangle_orbits = 0;
    unsigned long long automorphism_count = 0;
    bool has_color_swapping_symmetry = false;
};

// Orbit counts of the incidence-preserving automorphism group of the
// quadrilateral tiling and its triangle bisection. Automorphisms may swap
// the red and blue side classes globally (isometries of the deformed
// surfaces need not preserve our coloring).
TransitivityReport quad_transitivity(const AssembledSurface& x, int max_cells = 20000);

struct FillsComponent {
    int euler_characteristic = 0;
    int boundary_circles = 0;
    int quad_count = 0;
};

struct FillsResult {
    bool fills = false;
    std::vector<FillsComponent> components;
};

// Cuts the quadrilateral tiling along the given curves; fills iff every
// complement component is a disk.
FillsResult fills_check(const AssembledSurface& x, const std::vector<CurveRef>& subset);

// The five-blocks-on-K5 surface: tetrahedron blocks glued along the dual
// pattern of the boundary of the 4-simplex (each pair of blocks shares one
// boundary circle, slots matched by shared triangle vertices).
AssembledSurface k5_tetrahedra_surface();

struct K5SearchResult {
    long long labelings_tried = 0;
    long long closing = 0;          // all blue curves close in 3 steps
    long long matching_fixture = 0; // intersection matrix matches the known one
};

// Enumerates boundary-label assignments (a bijection neighbors -> {1..4}
// per K5 vertex, the first vertex pinned) with slot circles matched
// antiparallel under a uniform twist, and counts gluings whose blue arcs
// close in three steps and whose intersection matrix is permutation-
// equivalent to the known 10x10 fixture. A positive limit caps how many
// labelings are tried.
K5SearchResult search_k5_gluings(const std::vector<std::vector<int>>& fixture,
                                 long long limit = 0);

} // namespace forge
