#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "forge/assembly.hpp"
#include "forge/half_edge_graph.hpp"

namespace forge {

using BigInt = boost::multiprecision::cpp_int;
using IntMatrix = std::vector<std::vector<BigInt>>;

// Red x blue intersection record: A is 0/1 (distinct systoles meet at most
// once), I_S the bipartite intersection graph with red curves first.
struct IntersectionData {
    int red_count = 0;
    int blue_count = 0;
    std::vector<std::vector<int>> matrix; // red x blue, entries 0/1
    HalfEdgeGraph intersection_graph;     // vertices: red then blue curves
};

// Builds A from corner incidence: each tiling vertex is one red-blue
// crossing. Throws MultipleIntersection if a pair crosses twice.
IntersectionData intersection_data(const AssembledSurface& x);

// The symmetric block matrix (0 A; A^T 0).
IntMatrix dtilde(const IntersectionData& d);

// Exact determinant by Bareiss fraction-free elimination.
BigInt exact_determinant(IntMatrix m);
// Exact rank by fraction-free elimination with full pivoting.
int exact_rank(IntMatrix m);

// Adjacency determinant via the elementary-spanning-subgraph expansion:
// sum over spanning subgraphs whose components are single edges or cycles
// of (-1)^{#even components} * 2^{#cycles}. Enumeration oracle, capped at
// 16 vertices.
BigInt harary_determinant(const HalfEdgeGraph& simple_graph);

// Number of perfect matchings (for the even-tree check).
long long perfect_matching_count(const HalfEdgeGraph& simple_graph);

// The twist-derivative matrix cos(theta) * (0 A; -A^T 0): rows and columns
// ordered red curves then blue curves.
std::vector<std::vector<double>> twist_matrix(const IntersectionData& d, double theta);

struct CriticalityReport {
    int systole_count = 0;
    BigInt det_dtilde;
    int rank_dtilde = 0;
    std::string theta_dependence; // the scalar structure of the twist matrix
    int index_upper_bound = 0;    // = systole count
    std::optional<int> codimension_bound;     // |S| - 1 when det != 0, theta != pi/2
    std::optional<int> dimension_lower_bound; // 6g - 6 - (|S| - 1)
    std::string to_json() const;              // exact integers as decimal strings
};

CriticalityReport criticality_report(const AssembledSurface& x, double theta);

// Searches induced subtrees of the intersection graph with an even number
// of vertices whose curves fill, in canonical order (size ascending, then
// lexicographic). The fills oracle is injected so toy intersection graphs
// can be searched without a surface.
std::optional<std::vector<int>> tree_subset_search(
    const IntersectionData& d, const std::function<bool(const std::vector<int>&)>& fills);
std::optional<std::vector<CurveRef>> tree_subset_search(const IntersectionData& d,
                                                        const AssembledSurface& x);

// Permutation equivalence of 0/1 matrices (rows to rows, columns to
// columns), decided by canonical bipartite labeling with refinement and
// backtracking.
std::vector<std::vector<int>> bipartite_canonical_form(const std::vector<std::vector<int>>& m);
bool bipartite_permutation_equivalent(const std::vector<std::vector<int>>& a,
                                      const std::vector<std::vector<int>>& b);

// The published 10x10 red x blue intersection matrix of the five-blocks-
// on-K5 surface; determinant 48.
const std::vector<std::vector<int>>& k5_intersection_fixture();

std::string matrix_to_json(const std::vector<std::vector<int>>& m);
std::vector<std::vector<int>> matrix_from_json(const std::string& text);

} // namespace forge
