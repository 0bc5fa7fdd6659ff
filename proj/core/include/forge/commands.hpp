#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forge/assembly.hpp"
#include "forge/covering.hpp"

namespace forge {

struct ReportClause {
    std::string name;
    bool passed = false;
    std::string value;
    std::string expected;
};

// Deterministic run record: identical inputs give byte-identical JSON once
// the timings entry is dropped.
struct RunReport {
    std::string command;
    std::map<std::string, std::string> inputs; // label -> content hash
    std::vector<ReportClause> clauses;
    double elapsed_seconds = 0;

    bool passed() const;
    void add(const std::string& name, bool ok, const std::string& value,
             const std::string& expected);
    std::string to_json(bool include_timings = true) const;
};

uint64_t fnv1a_hash(const std::string& content);

// Standard surfaces used across commands and tests.
namespace fixtures {

// The double of the (g+1)-holed sphere block across its boundary:
// genus g, q = g+1, p = 2, 2g+2 systoles forming a chain.
AssembledSurface chain(int g);
// Same construction parameterized by the polygon: q bigonal faces.
AssembledSurface beachball_theta(int q);
// Cube block (p = 4, q = 3, six boundaries) glued along the 64-vertex
// girth-4 homology cover of the six-edge theta graph.
AssembledSurface cube_over_girth4_cover();
// A blue-closing bespoke gluing over a girth-1 multigraph; trace succeeds
// but the systole hypotheses fail.
AssembledSurface girth_defect_surface();

ColoredGluingGraph theta_coloring(int d);

} // namespace fixtures

// reproduce targets: "chain:g", "k5", "beachball_theta:q",
// "doubled_theta_tower:d,n".
RunReport cmd_reproduce(const std::string& example);

// Numerical identities of the polygon family over an inclusive q range
// within [3, 12].
RunReport cmd_verify_lemmas(int q_min, int q_max);

// Exportable objects: "graph:<name>", "map:<name>[,param]",
// "cover:<d>[,iterations]", "polygon:<q>,<theta>", "surface:chain:<g>",
// "matrix:k5", "intersection:k5". Formats: "json", "dot" (graphs only).
std::string cmd_export(const std::string& what, const std::string& format);

} // namespace forge
