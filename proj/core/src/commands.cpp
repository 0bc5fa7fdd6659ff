#include "forge/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "forge/analysis.hpp"
#include "forge/cycles.hpp"
#include "forge/error.hpp"
#include "forge/graphs.hpp"
#include "forge/hyperbolic.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

bool RunReport::passed() const {
    return std::all_of(clauses.begin(), clauses.end(),
                       [](const ReportClause& c) { return c.passed; });
}

void RunReport::add(const std::string& name, bool ok, const std::string& value,
                    const std::string& expected) {
    clauses.push_back(ReportClause{name, ok, value, expected});
}

std::string RunReport::to_json(bool include_timings) const {
    nlohmann::ordered_json j;
    j["command"] = command;
    auto& in = j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : inputs) in[k] = v;
    auto& cl = j["clauses"] = nlohmann::ordered_json::object();
    for (const auto& c : clauses)
        cl[c.name] = {{"status", c.passed ? "pass" : "fail"},
                      {"value", c.value},
                      {"expected", c.expected}};
    j["passed"] = passed();
    if (include_timings) j["timings"] = {{"elapsed_seconds", elapsed_seconds}};
    return j.dump(2);
}

uint64_t fnv1a_hash(const std::string& content) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace fixtures {

ColoredGluingGraph theta_coloring(int d) {
    return make_colored_gluing_graph(identity_cover(theta_graph(d)));
}

AssembledSurface chain(int g) {
    require(g >= 2, "DomainError", "chain surfaces need genus >= 2");
    Block b = build_block(catalog_map("theta_map", g + 1));
    return assemble(b, theta_coloring(g + 1));
}

AssembledSurface beachball_theta(int q) {
    require(q >= 3, "DomainError", "beach ball gluings need q >= 3");
    Block b = build_block(catalog_map("beach_ball", q));
    return assemble(b, theta_coloring(q));
}

AssembledSurface cube_over_girth4_cover() {
    Block b = build_block(catalog_map("cube"));
    Mod2Cover cover = mod2_homology_cover(theta_graph(6));
    return assemble(b, make_colored_gluing_graph(cover.cover));
}

AssembledSurface girth_defect_surface() {
    // Two dipole blocks (p = 2, q = 3, three boundaries each). The gluing
    // graph has a loop at each vertex plus one connecting edge, so its
    // girth is 1 < p while every blue arc still closes in two steps. The
    // slot and corner maps realizing that closure are found by scanning
    // the handful of circle identifications.
    Block b = build_block(catalog_map("theta_map", 3));
    // Vertices {0, 1}; darts: loop at 0 (0,1), loop at 1 (2,3), edge (4,5).
    HalfEdgeGraph G(2, {1, 0, 3, 2, 5, 4}, {0, 0, 1, 1, 0, 1});

    std::vector<std::pair<std::vector<int>, std::vector<int>>> circle_maps = {
        {{0, 1}, {0, 1}}, // parallel
        {{0, 1}, {1, 0}}, // antiparallel, fixed slots
        {{1, 0}, {0, 1}}, // swapped slots, corners fixed
        {{1, 0}, {1, 0}}, // swapped slots and corners
    };
    for (const auto& [loop_pos, loop_corner] : circle_maps) {
        for (const auto& [bridge_pos, bridge_corner] : circle_maps) {
            RedGluing loop0{0, 0, 0, 0, 1, loop_pos, loop_corner};
            RedGluing loop1{1, 1, 1, 0, 1, loop_pos, loop_corner};
            RedGluing bridge{2, 0, 1, 2, 2, bridge_pos, bridge_corner};
            try {
                AssembledSurface x(b, G, {loop0, loop1, bridge});
                x.curves(); // blue closure in exactly p steps
                return x;
            } catch (const Error&) {
                continue;
            }
        }
    }
    fail("Internal", "no circle identification closes the girth-defect fixture");
}

} // namespace fixtures

namespace {

void chain_like_clauses(RunReport& rep, const AssembledSurface& x, int expected_genus) {
    int g = genus(x);
    rep.add("genus", g == expected_genus, std::to_string(g), std::to_string(expected_genus));

    int count = systole_count(x);
    int expected_count = 2 * expected_genus + 2;
    rep.add("systole_count", count == expected_count, std::to_string(count),
            std::to_string(expected_count));

    IntersectionData d = intersection_data(x);
    BigInt det = exact_determinant(dtilde(d));
    BigInt expected_det = (expected_genus % 2 == 0) ? BigInt(-4) : BigInt(0);
    rep.add("det_dtilde", det == expected_det, det.str(), expected_det.str());

    const double L = regular_side_length(x.block().q);
    double expect_len = x.block().p * L;
    bool lengths_ok = true;
    double worst = 0;
    const CurveSystem& cs = x.curves();
    for (size_t i = 0; i < cs.red_curves.size(); ++i) {
        double len = holonomy_length(x, {true, static_cast<int>(i)}, kPi / 2);
        worst = std::max(worst, std::abs(len - expect_len));
    }
    for (size_t i = 0; i < cs.blue_curves.size(); ++i) {
        double len = holonomy_length(x, {false, static_cast<int>(i)}, kPi / 2);
        worst = std::max(worst, std::abs(len - expect_len));
    }
    lengths_ok = worst < 1e-8;
    rep.add("holonomy_lengths", lengths_ok, fmt(worst), "< 1e-8 from p*L");

    std::vector<CurveRef> all;
    for (size_t i = 0; i < cs.red_curves.size(); ++i) all.push_back({true, (int)i});
    for (size_t i = 0; i < cs.blue_curves.size(); ++i) all.push_back({false, (int)i});
    FillsResult fr = fills_check(x, all);
    bool comp_ok = fr.fills && static_cast<int>(fr.components.size()) == x.tile_count();
    rep.add("systoles_fill", comp_ok, std::to_string(fr.components.size()) + " components",
            std::to_string(x.tile_count()) + " disk components");

    TransitivityReport tr = quad_transitivity(x);
    rep.add("quad_transitive", tr.quad_transitive, std::to_string(tr.quad_orbits) + " orbit(s)",
            "1 orbit");
}

RunReport reproduce_chain(int g) {
    RunReport rep;
    rep.command = "reproduce chain:" + std::to_string(g);
    AssembledSurface x = fixtures::chain(g);
    rep.inputs["surface"] = std::to_string(fnv1a_hash(x.to_json()));
    chain_like_clauses(rep, x, g);
    return rep;
}

RunReport reproduce_beachball(int q) {
    RunReport rep;
    rep.command = "reproduce beachball_theta:" + std::to_string(q);
    AssembledSurface x = fixtures::beachball_theta(q);
    rep.inputs["surface"] = std::to_string(fnv1a_hash(x.to_json()));
    chain_like_clauses(rep, x, q - 1);
    return rep;
}

RunReport reproduce_k5() {
    RunReport rep;
    rep.command = "reproduce k5";
    AssembledSurface x = k5_tetrahedra_surface();
    rep.inputs["surface"] = std::to_string(fnv1a_hash(x.to_json()));

    int g = genus(x);
    rep.add("genus", g == 6, std::to_string(g), "6");
    int count = systole_count(x);
    rep.add("systole_count", count == 20, std::to_string(count), "20");
    const CurveSystem& cs = x.curves();
    rep.add("red_blue_split",
            cs.red_curves.size() == 10 && cs.blue_curves.size() == 10,
            std::to_string(cs.red_curves.size()) + "+" + std::to_string(cs.blue_curves.size()),
            "10+10");

    IntersectionData d = intersection_data(x);
    bool equivalent = bipartite_permutation_equivalent(d.matrix, k5_intersection_fixture());
    rep.add("matrix_matches_fixture", equivalent, equivalent ? "equivalent" : "different",
            "permutation-equivalent");

    IntMatrix a(10, std::vector<BigInt>(10));
    for (int r = 0; r < 10; ++r)
        for (int b = 0; b < 10; ++b) a[r][b] = k5_intersection_fixture()[r][b];
    BigInt det_a = exact_determinant(a);
    rep.add("det_fixture", det_a == 48, det_a.str(), "48");

    BigInt det_dt = exact_determinant(dtilde(d));
    rep.add("det_dtilde", det_dt == 2304, det_dt.str(), "2304 (= 48^2)");

    CriticalityReport cr = criticality_report(x, 1.0);
    bool bounds = cr.index_upper_bound == 20 && cr.codimension_bound &&
                  *cr.codimension_bound == 19 && cr.dimension_lower_bound &&
                  *cr.dimension_lower_bound == 11;
    rep.add("criticality_bounds", bounds,
            "index<=" + std::to_string(cr.index_upper_bound) + ", codim<=" +
                (cr.codimension_bound ? std::to_string(*cr.codimension_bound) : "-") +
                ", dim>=" +
                (cr.dimension_lower_bound ? std::to_string(*cr.dimension_lower_bound) : "-"),
            "index<=20, codim<=19, dim>=11");
    return rep;
}

RunReport reproduce_tower(int d, int iterations) {
    RunReport rep;
    rep.command = "reproduce doubled_theta_tower:" + std::to_string(d) + "," +
                  std::to_string(iterations);
    HalfEdgeGraph base = theta_graph(d);
    rep.inputs["base"] = std::to_string(fnv1a_hash(base.to_json()));
    int expected_girth = 2;
    for (int i = 0; i < iterations; ++i) {
        Mod2Cover cover = mod2_homology_cover(base);
        DoublingCertificate cert = evaluate_girth_doubling(cover.cover);
        expected_girth *= 2;
        rep.add("stage_" + std::to_string(i + 1) + "_girth",
                cert.passed && cert.total_girth == expected_girth,
                std::to_string(cert.total_girth), std::to_string(expected_girth));
        rep.add("stage_" + std::to_string(i + 1) + "_certificate", cert.passed,
                cert.passed ? "all clauses pass" : "a clause failed", "all clauses pass");
        base = cover.cover.total;
    }
    return rep;
}

} // namespace

RunReport cmd_reproduce(const std::string& example) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    auto parts = split(example, ':');
    if (parts[0] == "chain" && parts.size() == 2) {
        rep = reproduce_chain(std::stoi(parts[1]));
    } else if (parts[0] == "beachball_theta" && parts.size() == 2) {
        rep = reproduce_beachball(std::stoi(parts[1]));
    } else if (parts[0] == "k5") {
        rep = reproduce_k5();
    } else if (parts[0] == "doubled_theta_tower" && parts.size() == 2) {
        auto args = split(parts[1], ',');
        require(args.size() == 2, "UnknownName", "doubled_theta_tower takes d,n");
        rep = reproduce_tower(std::stoi(args[0]), std::stoi(args[1]));
    } else {
        fail("UnknownName", "no reproduction target '" + example + "'");
    }
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

RunReport cmd_verify_lemmas(int q_min, int q_max) {
    require(q_min >= 3 && q_max <= 12 && q_min <= q_max, "DomainError",
            "q range must lie within [3, 12]");
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.command = "verify-lemmas " + std::to_string(q_min) + ".." + std::to_string(q_max);

    for (int q = q_min; q <= q_max; ++q) {
        std::string tag = "q" + std::to_string(q);
        double L = regular_side_length(q);

        double identity_residual = std::abs(std::cosh(L) - (1 + 2 * std::cos(kPi / q)));
        rep.add(tag + ".cosh_identity", identity_residual < 1e-12, fmt(identity_residual),
                "< 1e-12");

        double deformed = deformed_side_length(q, kPi / 2);
        rep.add(tag + ".deformed_matches_regular", std::abs(deformed - L) < 1e-12,
                fmt(std::abs(deformed - L)), "< 1e-12");

        PolygonMetric poly = build_polygon(q, kPi / 2);
        bool eq_ok = true, strict_ok = true;
        double min_excess = 1e9;
        for (int i = 0; i < 2 * q; ++i)
            for (int j = i + 2; j < 2 * q; ++j) {
                int sep = std::min(j - i, 2 * q - (j - i));
                if (sep < 2) continue;
                double dist = side_distance(poly, i, j);
                if (sep == 2) {
                    if (std::abs(dist - L) > 1e-9) eq_ok = false;
                } else {
                    min_excess = std::min(min_excess, dist - L);
                    if (dist - L <= 1e-6) strict_ok = false;
                }
            }
        rep.add(tag + ".arc_bound_equality", eq_ok, "separation-one distance = L", "within 1e-9");
        if (2 * q > 4)
            rep.add(tag + ".arc_bound_strict", strict_ok, fmt(min_excess) + " above L",
                    "> 1e-6");

        // Quadrilateral relation on the quarter-cells of the polygon.
        double a = point_distance(poly.vertex(1), poly.side_midpoint(1));
        double b = point_distance(poly.vertex(1), poly.side_midpoint(0));
        double residual = std::abs(quad_relation_check(a, b, q));
        rep.add(tag + ".quad_relation", residual < 1e-10, fmt(residual), "< 1e-10");

        // Opposite length derivatives along the relation.
        double a0 = std::asinh(std::sqrt(std::cos(kPi / q)));
        auto b_of = [&](double av) { return std::asinh(std::cos(kPi / q) / std::sinh(av)); };
        double h = 1e-6;
        double db = (b_of(a0 + h) - b_of(a0 - h)) / (2 * h);
        rep.add(tag + ".opposite_derivatives", db < 0, fmt(db), "< 0");
    }
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string cmd_export(const std::string& what, const std::string& format) {
    auto parts = split(what, ':');
    require(!parts.empty(), "UnknownName", "nothing to export");
    require(format == "json" || format == "dot", "UnknownName",
            "format must be json or dot");

    if (parts[0] == "graph" && parts.size() == 2) {
        HalfEdgeGraph g = graph_by_name(parts[1]);
        return format == "json" ? g.to_json() : g.to_dot();
    }
    if (parts[0] == "map" && parts.size() >= 2) {
        auto args = split(parts[1], ',');
        int param = args.size() > 1 ? std::stoi(args[1]) : 0;
        RotationMap m = catalog_map(args[0], param);
        require(format == "json", "UnknownName", "maps export as json");
        return m.to_json();
    }
    if (parts[0] == "cover" && parts.size() == 2) {
        auto args = split(parts[1], ',');
        int d = std::stoi(args[0]);
        int iterations = args.size() > 1 ? std::stoi(args[1]) : 1;
        HalfEdgeGraph base = theta_graph(d);
        CoveringMap cover = identity_cover(base);
        for (int i = 0; i < iterations; ++i) {
            Mod2Cover next = mod2_homology_cover(cover.total);
            cover = i == 0 ? next.cover : compose_covers(next.cover, cover);
        }
        require(format == "json", "UnknownName", "covers export as json");
        return cover.to_json();
    }
    if (parts[0] == "polygon" && parts.size() == 2) {
        auto args = split(parts[1], ',');
        require(args.size() == 2, "UnknownName", "polygon export takes q,theta");
        require(format == "json", "UnknownName", "polygons export as json");
        return build_polygon(std::stoi(args[0]), std::stod(args[1])).to_json();
    }
    if (parts[0] == "surface" && parts.size() == 3 && parts[1] == "chain") {
        AssembledSurface x = fixtures::chain(std::stoi(parts[2]));
        require(format == "json", "UnknownName", "surfaces export as json");
        return x.to_json();
    }
    if (parts[0] == "matrix" && parts.size() == 2 && parts[1] == "k5") {
        require(format == "json", "UnknownName", "matrices export as json");
        return matrix_to_json(k5_intersection_fixture());
    }
    if (parts[0] == "intersection" && parts.size() == 2 && parts[1] == "k5") {
        AssembledSurface x = k5_tetrahedra_surface();
        IntersectionData d = intersection_data(x);
        if (format == "json") return matrix_to_json(d.matrix);
        HalfEdgeGraph ig = d.intersection_graph;
        for (Vertex v = 0; v < ig.vertex_count(); ++v)
            ig.set_vertex_label(v, v < d.red_count ? 0 : 1);
        return ig.to_dot("intersection");
    }
    if (parts[0] == "report" && parts.size() == 3 && parts[1] == "chain") {
        return cmd_reproduce("chain:" + parts[2]).to_json();
    }
    fail("UnknownName", "no exportable object '" + what + "'");
}

} // namespace forge
