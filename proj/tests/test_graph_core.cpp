#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "forge/automorphism.hpp"
#include "forge/cycles.hpp"
#include "forge/error.hpp"
#include "forge/graphs.hpp"
#include "forge/rotation_map.hpp"

using namespace forge;

namespace {

#define CHECK_ERROR_CODE(expr, code_)                                                            \
    do {                                                                                         \
        bool caught_ = false;                                                                    \
        try {                                                                                    \
            expr;                                                                                \
        } catch (const Error& e) {                                                               \
            caught_ = true;                                                                      \
            CHECK(e.code() == code_);                                                            \
        }                                                                                        \
        CHECK(caught_);                                                                          \
    } while (0)

// Oracle: dart-level automorphism count by enumerating all dart
// permutations; only viable for very small graphs.
long long brute_force_dart_automorphisms(const HalfEdgeGraph& g) {
    std::vector<int> perm(g.dart_count());
    std::iota(perm.begin(), perm.end(), 0);
    long long count = 0;
    do {
        bool ok = true;
        std::vector<Vertex> vmap(g.vertex_count(), -1);
        for (Dart d = 0; d < g.dart_count() && ok; ++d) {
            if (perm[g.theta(d)] != g.theta(perm[d])) ok = false;
            if (!ok) break;
            Vertex v = g.tail(d), w = g.tail(perm[d]);
            if (vmap[v] == -1) vmap[v] = w;
            else if (vmap[v] != w) ok = false;
        }
        if (ok) {
            std::vector<char> used(g.vertex_count(), 0);
            for (Vertex v = 0; v < g.vertex_count() && ok; ++v) {
                if (vmap[v] < 0 || used[vmap[v]]) ok = false;
                else used[vmap[v]] = 1;
            }
        }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

// Oracle: vertex-permutation automorphism count for simple graphs.
long long brute_force_vertex_automorphisms(const HalfEdgeGraph& g) {
    std::vector<std::vector<char>> adj(g.vertex_count(),
                                       std::vector<char>(g.vertex_count(), 0));
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        adj[g.tail(d1)][g.tail(d2)] = 1;
        adj[g.tail(d2)][g.tail(d1)] = 1;
    }
    std::vector<int> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    long long count = 0;
    do {
        bool ok = true;
        for (int i = 0; i < g.vertex_count() && ok; ++i)
            for (int j = 0; j < g.vertex_count() && ok; ++j)
                if (adj[i][j] != adj[perm[i]][perm[j]]) ok = false;
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

HalfEdgeGraph random_multigraph(std::mt19937& rng, int max_vertices, int max_edges) {
    int n = 2 + static_cast<int>(rng() % max_vertices);
    int m = 1 + static_cast<int>(rng() % max_edges);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int e = 0; e < m; ++e) {
        Vertex u = static_cast<Vertex>(rng() % n);
        Vertex v = static_cast<Vertex>(rng() % n);
        edges.push_back({u, v});
    }
    // Half-edge graphs reject fixed points of theta, not loops; loops are
    // fine. But a loop needs two darts, which graph_from_edge_list builds.
    return graph_from_edge_list(n, edges);
}

} // namespace

TEST_CASE("girth of the theta graph is 2 with one bigon per edge pair") {
    auto g = theta_graph(3);
    auto result = girth(g);
    CHECK(result.length == 2);
    CHECK(result.witnesses.size() == 3);
}

TEST_CASE("girth of the Petersen graph is 5") {
    CHECK(girth(petersen_graph()).length == 5);
}

TEST_CASE("a single loop has girth 1") {
    auto result = girth(single_loop_graph());
    CHECK(result.length == 1);
    CHECK(result.witnesses.size() == 1);
}

TEST_CASE("forests have no cycles") {
    CHECK_ERROR_CODE(girth(path_graph(4)), "NoCycle");
}

TEST_CASE("girth by BFS agrees with exhaustive cycle enumeration") {
    std::mt19937 rng(20240817);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        HalfEdgeGraph g = random_multigraph(rng, 5, 10);
        int bfs_girth = 0;
        bool has_cycle = true;
        try {
            bfs_girth = girth_length(g);
        } catch (const Error& e) {
            CHECK(e.code() == "NoCycle");
            has_cycle = false;
        }
        auto all = enumerate_embedded_cycles(g, g.edge_count() + 1);
        if (!has_cycle) {
            CHECK(all.empty());
            continue;
        }
        REQUIRE(!all.empty());
        int min_len = all.front().length();
        for (const auto& c : all) min_len = std::min(min_len, c.length());
        CHECK(bfs_girth == min_len);
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("cycle canonical form is stable under rotation and reversal") {
    auto g = petersen_graph();
    auto result = girth(g);
    std::mt19937 rng(7);
    for (const auto& cycle : result.witnesses) {
        std::vector<Dart> darts = cycle.darts;
        for (int trial = 0; trial < 8; ++trial) {
            std::rotate(darts.begin(), darts.begin() + rng() % darts.size(), darts.end());
            if (rng() % 2) {
                std::reverse(darts.begin(), darts.end());
                for (Dart& d : darts) d = g.theta(d);
            }
            CHECK(canonical_cycle(g, darts) == cycle);
        }
    }
}

TEST_CASE("embedded 2-paths") {
    CHECK(embedded_two_paths(complete_graph(3)).size() == 3);
    CHECK(embedded_two_paths(theta_graph(3)).size() == 6);
    CHECK(embedded_two_paths(path_graph(2)).empty());
}

TEST_CASE("strict polygonal verdicts") {
    auto dodecahedron = catalog_map("dodecahedron").graph();
    CHECK(is_strict_polygonal(dodecahedron).verdict);

    auto petersen = is_strict_polygonal(petersen_graph());
    CHECK(!petersen.verdict);
    CHECK(petersen.witness_cycle_count == 2);

    CHECK(is_strict_polygonal(theta_graph(2)).verdict);
    CHECK(is_strict_polygonal(theta_graph(3)).verdict);
    CHECK(is_strict_polygonal(complete_graph(4)).verdict);
    CHECK(is_strict_polygonal(catalog_map("cube").graph()).verdict);
}

TEST_CASE("automorphism group orders") {
    SUBCASE("Petersen graph has order 120, matching the brute-force oracle") {
        auto group = automorphism_group(petersen_graph());
        CHECK(group.order == 120);
        CHECK(brute_force_vertex_automorphisms(petersen_graph()) == 120);
    }
    SUBCASE("theta graphs have order 2 d!") {
        CHECK(automorphism_group(theta_graph(2)).order == 4);
        CHECK(automorphism_group(theta_graph(3)).order == 12);
        CHECK(automorphism_group(theta_graph(4)).order == 48);
        // Dart-level oracle for the small cases.
        CHECK(brute_force_dart_automorphisms(theta_graph(2)) == 4);
        CHECK(brute_force_dart_automorphisms(theta_graph(3)) == 12);
        CHECK(brute_force_dart_automorphisms(theta_graph(4)) == 48);
    }
    SUBCASE("a single edge flips") {
        CHECK(automorphism_group(path_graph(2)).order == 2);
    }
    SUBCASE("a single loop flips") {
        CHECK(automorphism_group(single_loop_graph()).order == 2);
    }
}

TEST_CASE("automorphism generators preserve structure") {
    for (const auto& g : {petersen_graph(), theta_graph(4), complete_graph(4)}) {
        auto group = automorphism_group(g);
        unsigned long long bound = 1;
        for (int i = 2; i <= g.dart_count() && bound < group.order; ++i) bound *= i;
        CHECK(group.order <= bound);
        for (const auto& a : group.generators) {
            CHECK(is_graph_automorphism(g, a));
            for (Vertex v = 0; v < g.vertex_count(); ++v)
                CHECK(g.valence(v) == g.valence(a.vertex_perm[v]));
        }
    }
}

TEST_CASE("label-respecting automorphisms are a subgroup") {
    auto g = theta_graph(3);
    g.set_edge_label(0, 1);
    g.set_edge_label(1, 2);
    g.set_edge_label(2, 3);
    // Distinct edge labels kill the edge permutations; only the vertex
    // swap remains (it maps each edge to itself).
    CHECK(automorphism_group(g, true).order == 2);
    CHECK(automorphism_group(g, false).order == 12);
}

TEST_CASE("isotropy") {
    CHECK(is_isotropic(petersen_graph()).verdict);
    CHECK(is_isotropic(theta_graph(4)).verdict);
    CHECK(is_isotropic(theta_graph(2)).verdict);
    CHECK(is_isotropic(complete_graph(5)).verdict);

    auto path = is_isotropic(path_graph(3));
    CHECK(!path.verdict);
    CHECK(path.inequivalent_vertices.has_value());

    // The cycle C6 is vertex transitive and locally symmetric (valence 2).
    CHECK(is_isotropic(cycle_graph(6)).verdict);
}

TEST_CASE("isotropic fixtures are vertex transitive") {
    for (const auto& g : {petersen_graph(), theta_graph(3), complete_graph(4), cycle_graph(5)}) {
        auto iso = is_isotropic(g);
        if (iso.verdict) CHECK(is_vertex_transitive(g));
    }
}

TEST_CASE("graph document round trip") {
    auto g = theta_graph(3);
    g.set_vertex_label(0, 1);
    g.set_vertex_label(1, -1);
    g.set_edge_label(0, 1);
    g.set_edge_label(1, 2);
    g.set_edge_label(2, 3);
    auto parsed = HalfEdgeGraph::from_json(g.to_json());
    CHECK(parsed == g);
    CHECK(parsed.to_json() == g.to_json());
}

TEST_CASE("dot export mentions every edge") {
    auto g = theta_graph(3);
    g.set_edge_label(0, 1);
    std::string dot = g.to_dot();
    CHECK(dot.find("graph G {") == 0);
    CHECK(std::count(dot.begin(), dot.end(), '-') >= 6);
}

TEST_CASE("malformed graph documents are rejected") {
    CHECK_ERROR_CODE(HalfEdgeGraph::from_json("{"), "IoError");
    CHECK_ERROR_CODE(HalfEdgeGraph::from_json("{\"vertices\": 1}"), "IoError");
    // theta with a fixed point.
    CHECK_ERROR_CODE(HalfEdgeGraph(1, {0, 1}, {0, 0}), "BadGraph");
}
