#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "forge/automorphism.hpp"
#include "forge/covering.hpp"
#include "forge/cycles.hpp"
#include "forge/error.hpp"
#include "forge/graphs.hpp"

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

// GF(2) class of a closed walk from the voltage assignment.
uint32_t walk_class(const Mod2Cover& mc, const std::vector<Dart>& walk) {
    uint32_t c = 0;
    for (Dart d : walk) c ^= mc.edge_voltage[mc.cover.base.edge_of(d)];
    return c;
}

} // namespace

TEST_CASE("mod-2 cover of the 3-edge theta graph") {
    auto mc = mod2_homology_cover(theta_graph(3));
    CHECK(mc.rank == 2);
    CHECK(mc.cover.degree == 4);
    CHECK(mc.cover.total.vertex_count() == 8);
    CHECK(mc.cover.total.edge_count() == 12);
    CHECK(mc.cover.total.is_connected());
}

TEST_CASE("a tree has a trivial mod-2 cover") {
    auto mc = mod2_homology_cover(path_graph(4));
    CHECK(mc.cover.degree == 1);
    CHECK(mc.cover.total.vertex_count() == 4);
}

TEST_CASE("the loop doubles to a 2-cycle") {
    auto mc = mod2_homology_cover(single_loop_graph());
    CHECK(mc.cover.degree == 2);
    CHECK(mc.cover.total.vertex_count() == 2);
    CHECK(girth(mc.cover.total).length == 2);
}

TEST_CASE("cover size cap") {
    CHECK_ERROR_CODE(mod2_homology_cover(theta_graph(25)), "TooLarge");
}

TEST_CASE("closed walks lift closed exactly when their GF(2) class vanishes") {
    auto mc = mod2_homology_cover(theta_graph(3));
    const auto& base = mc.cover.base;
    int base_girth = girth(base).length;
    std::vector<std::vector<Dart>> walks;
    std::vector<Dart> current;
    auto dfs = [&](auto&& self, Vertex at, int depth) -> void {
        if (depth > 0 && at == 0) walks.push_back(current);
        if (depth == 2 * base_girth) return;
        for (Dart d : base.star(at)) {
            current.push_back(d);
            self(self, base.head(d), depth + 1);
            current.pop_back();
        }
    };
    dfs(dfs, 0, 0);
    REQUIRE(!walks.empty());
    Vertex start = mc.cover.fiber(0)[0];
    for (const auto& walk : walks) {
        auto lifted = lift_walk(mc.cover, start, walk);
        REQUIRE(lifted.has_value());
        Vertex end = mc.cover.total.head(lifted->back());
        bool closed = end == start;
        CHECK(closed == (walk_class(mc, walk) == 0));
    }
}

TEST_CASE("deck group is transitive on fibers") {
    for (int d : {2, 3, 4}) {
        auto mc = mod2_homology_cover(theta_graph(d));
        auto deck = deck_transformations(mc.cover);
        CHECK(static_cast<int>(deck.size()) == mc.cover.degree);
        std::set<Vertex> orbit;
        for (const auto& t : deck) {
            CHECK(is_graph_automorphism(mc.cover.total, t));
            orbit.insert(t.vertex_perm[0]);
        }
        CHECK(static_cast<int>(orbit.size()) == mc.cover.degree);
    }
}

TEST_CASE("girth doubling certificates for the theta family") {
    for (int d : {2, 3, 4, 5}) {
        auto mc = mod2_homology_cover(theta_graph(d));
        auto cert = certify_girth_doubling(mc.cover);
        CHECK(cert.passed);
        CHECK(cert.base_girth == 2);
        CHECK(cert.total_girth == 4);
    }
}

TEST_CASE("second iterate reaches girth 8 with isotropy and strict polygonality") {
    auto first = mod2_homology_cover(theta_graph(3));
    auto second = mod2_homology_cover(first.cover.total);
    CHECK(second.cover.total.vertex_count() == 256);
    auto cert = certify_girth_doubling(second.cover);
    CHECK(cert.passed);
    CHECK(cert.total_girth == 8);
    // Composing the two covers quadruples the girth of the original base.
    auto composed = compose_covers(second.cover, first.cover);
    CHECK(composed.degree == 128);
    CHECK(girth(composed.total).length == 4 * girth(composed.base).length);
}

TEST_CASE("the identity cover fails certification") {
    CHECK_ERROR_CODE(certify_girth_doubling(identity_cover(petersen_graph())),
                     "CertificationFailed");
    auto cert = evaluate_girth_doubling(identity_cover(petersen_graph()));
    CHECK(!cert.passed);
    CHECK(cert.clauses[0].name == "girth_doubled");
    CHECK(!cert.clauses[0].passed);
}

TEST_CASE("automorphism lifting") {
    auto mc = mod2_homology_cover(theta_graph(2));

    SUBCASE("the identity lifts to a deck transformation") {
        auto lift = lift_automorphism(mc.cover, identity_automorphism(theta_graph(2)));
        CHECK(is_graph_automorphism(mc.cover.total, lift));
        for (Dart d = 0; d < mc.cover.total.dart_count(); ++d)
            CHECK(mc.cover.dart_map[lift.dart_perm[d]] == mc.cover.dart_map[d]);
    }

    SUBCASE("the edge swap lifts to a symmetry of the 4-cycle") {
        GraphAutomorphism swap;
        swap.vertex_perm = {0, 1};
        swap.dart_perm = {2, 3, 0, 1};
        REQUIRE(is_graph_automorphism(theta_graph(2), swap));
        auto lift = lift_automorphism(mc.cover, swap);
        CHECK(is_graph_automorphism(mc.cover.total, lift));
        for (Dart d = 0; d < mc.cover.total.dart_count(); ++d)
            CHECK(mc.cover.dart_map[lift.dart_perm[d]] == swap.dart_perm[mc.cover.dart_map[d]]);
    }

    SUBCASE("every generator of the base group lifts") {
        auto mc3 = mod2_homology_cover(theta_graph(3));
        auto group = automorphism_group(theta_graph(3));
        for (const auto& psi : group.generators) {
            auto lift = lift_automorphism(mc3.cover, psi);
            CHECK(is_graph_automorphism(mc3.cover.total, lift));
            for (Dart d = 0; d < mc3.cover.total.dart_count(); ++d)
                CHECK(mc3.cover.dart_map[lift.dart_perm[d]] ==
                      psi.dart_perm[mc3.cover.dart_map[d]]);
        }
    }
}

TEST_CASE("colored gluing graphs") {
    SUBCASE("the theta graph itself") {
        auto colored = make_colored_gluing_graph(identity_cover(theta_graph(3)));
        CHECK(colored.d == 3);
        CHECK(colored.vertex_sign == std::vector<int>{1, -1});
        CHECK(colored.edge_color == std::vector<int>{1, 2, 3});
    }
    SUBCASE("the 8-vertex cover") {
        auto mc = mod2_homology_cover(theta_graph(3));
        auto colored = make_colored_gluing_graph(mc.cover);
        colored.validate();
        CHECK(colored.graph.vertex_count() == 8);
        for (int e = 0; e < colored.graph.edge_count(); ++e) {
            auto [d1, d2] = colored.graph.edge_darts(e);
            CHECK(colored.vertex_sign[colored.graph.tail(d1)] !=
                  colored.vertex_sign[colored.graph.tail(d2)]);
        }
    }
    SUBCASE("the 256-vertex tower level validates at scale") {
        auto first = mod2_homology_cover(theta_graph(3));
        auto second = mod2_homology_cover(first.cover.total);
        auto composed = compose_covers(second.cover, first.cover);
        auto colored = make_colored_gluing_graph(composed);
        colored.validate();
        CHECK(colored.graph.vertex_count() == 256);
    }
    SUBCASE("non-theta bases are rejected") {
        CHECK_ERROR_CODE(make_colored_gluing_graph(identity_cover(petersen_graph())),
                         "BaseNotTheta");
    }
    SUBCASE("round trip through a labeled graph") {
        auto colored = make_colored_gluing_graph(mod2_homology_cover(theta_graph(4)).cover);
        auto rebuilt = colored_gluing_from_labeled_graph(colored.graph);
        CHECK(rebuilt.vertex_sign == colored.vertex_sign);
        CHECK(rebuilt.edge_color == colored.edge_color);
    }
}

TEST_CASE("covering document round trip") {
    auto mc = mod2_homology_cover(theta_graph(3));
    auto parsed = CoveringMap::from_json(mc.cover.to_json());
    CHECK(parsed.total == mc.cover.total);
    CHECK(parsed.base == mc.cover.base);
    CHECK(parsed.dart_map == mc.cover.dart_map);
    CHECK(parsed.degree == mc.cover.degree);
}

TEST_CASE("lifts through the triangle double cover, and broken covers are rejected") {
    auto triangle = complete_graph(3);
    auto mc = mod2_homology_cover(triangle);
    CHECK(mc.cover.degree == 2);
    auto group = automorphism_group(triangle);
    for (const auto& psi : group.generators)
        CHECK(is_graph_automorphism(mc.cover.total, lift_automorphism(mc.cover, psi)));

    CoveringMap broken = mc.cover;
    std::swap(broken.dart_map[0], broken.dart_map[2]); // darts over different base darts
    CHECK_ERROR_CODE(broken.validate(), "BadCover");
}
