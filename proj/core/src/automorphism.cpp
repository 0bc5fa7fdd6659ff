#include "forge/automorphism.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forge/error.hpp"

namespace forge {

GraphAutomorphism identity_automorphism(const HalfEdgeGraph& g) {
    GraphAutomorphism a;
    a.vertex_perm.resize(g.vertex_count());
    a.dart_perm.resize(g.dart_count());
    for (int i = 0; i < g.vertex_count(); ++i) a.vertex_perm[i] = i;
    for (int i = 0; i < g.dart_count(); ++i) a.dart_perm[i] = i;
    return a;
}

GraphAutomorphism compose(const GraphAutomorphism& f, const GraphAutomorphism& g) {
    GraphAutomorphism r;
    r.vertex_perm.resize(f.vertex_perm.size());
    r.dart_perm.resize(f.dart_perm.size());
    for (size_t i = 0; i < g.vertex_perm.size(); ++i) r.vertex_perm[i] = f.vertex_perm[g.vertex_perm[i]];
    for (size_t i = 0; i < g.dart_perm.size(); ++i) r.dart_perm[i] = f.dart_perm[g.dart_perm[i]];
    return r;
}

GraphAutomorphism inverse(const GraphAutomorphism& f) {
    GraphAutomorphism r;
    r.vertex_perm.resize(f.vertex_perm.size());
    r.dart_perm.resize(f.dart_perm.size());
    for (size_t i = 0; i < f.vertex_perm.size(); ++i) r.vertex_perm[f.vertex_perm[i]] = static_cast<int>(i);
    for (size_t i = 0; i < f.dart_perm.size(); ++i) r.dart_perm[f.dart_perm[i]] = static_cast<int>(i);
    return r;
}

bool is_graph_automorphism(const HalfEdgeGraph& g, const GraphAutomorphism& a,
                           bool respect_labels) {
    if (static_cast<int>(a.vertex_perm.size()) != g.vertex_count()) return false;
    if (static_cast<int>(a.dart_perm.size()) != g.dart_count()) return false;
    std::vector<char> seen_v(g.vertex_count(), 0), seen_d(g.dart_count(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        Vertex w = a.vertex_perm[v];
        if (w < 0 || w >= g.vertex_count() || seen_v[w]) return false;
        seen_v[w] = 1;
    }
    for (Dart d = 0; d < g.dart_count(); ++d) {
        Dart e = a.dart_perm[d];
        if (e < 0 || e >= g.dart_count() || seen_d[e]) return false;
        seen_d[e] = 1;
        if (a.dart_perm[g.theta(d)] != g.theta(e)) return false;
        if (a.vertex_perm[g.tail(d)] != g.tail(e)) return false;
    }
    if (respect_labels) {
        for (const auto& [v, l] : g.vertex_labels()) {
            auto it = g.vertex_labels().find(a.vertex_perm[v]);
            if (it == g.vertex_labels().end() || it->second != l) return false;
        }
        for (const auto& [e, l] : g.edge_labels()) {
            int image = g.edge_of(a.dart_perm[g.edge_darts(e).first]);
            auto it = g.edge_labels().find(image);
            if (it == g.edge_labels().end() || it->second != l) return false;
        }
    }
    return true;
}

namespace {

int vertex_label(const HalfEdgeGraph& g, Vertex v, bool respect) {
    if (!respect) return 0;
    auto it = g.vertex_labels().find(v);
    return it == g.vertex_labels().end() ? 0 : it->second;
}

int edge_label(const HalfEdgeGraph& g, int e, bool respect) {
    if (!respect) return 0;
    auto it = g.edge_labels().find(e);
    return it == g.edge_labels().end() ? 0 : it->second;
}

// Sorted multiset of edge labels in the bundle between u and v (loops use
// u == v and count each loop once).
std::vector<int> bundle_signature(const HalfEdgeGraph& g, Vertex u, Vertex v, bool respect) {
    std::vector<int> sig;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex a = g.tail(d1), b = g.tail(d2);
        if ((a == u && b == v) || (a == v && b == u)) sig.push_back(edge_label(g, e, respect));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

// Backtracking enumeration of vertex permutations consistent with
// valences, labels, and the full bundle structure.
void search_vertex_autos(const HalfEdgeGraph& g, bool respect,
                         std::vector<std::vector<Vertex>>& out) {
    const int n = g.vertex_count();
    std::vector<Vertex> image(n, -1);
    std::vector<char> used(n, 0);

    // Precompute per-pair bundle signatures.
    std::map<std::pair<Vertex, Vertex>, std::vector<int>> bundles;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex a = std::min(g.tail(d1), g.tail(d2));
        Vertex b = std::max(g.tail(d1), g.tail(d2));
        auto key = std::make_pair(a, b);
        if (!bundles.count(key)) bundles[key] = bundle_signature(g, a, b, respect);
    }
    auto bundle = [&](Vertex a, Vertex b) -> const std::vector<int>* {
        auto it = bundles.find({std::min(a, b), std::max(a, b)});
        return it == bundles.end() ? nullptr : &it->second;
    };
    auto bundles_equal = [&](Vertex a, Vertex b, Vertex a2, Vertex b2) {
        const auto* x = bundle(a, b);
        const auto* y = bundle(a2, b2);
        if (!x || !y) return x == y;
        return *x == *y;
    };

    auto rec = [&](auto&& self, int v) -> void {
        if (v == n) {
            out.push_back(image);
            return;
        }
        for (Vertex w = 0; w < n; ++w) {
            if (used[w]) continue;
            if (g.valence(v) != g.valence(w)) continue;
            if (vertex_label(g, v, respect) != vertex_label(g, w, respect)) continue;
            if (!bundles_equal(v, v, w, w)) continue; // loop bundles
            bool ok = true;
            for (Vertex u = 0; u < v && ok; ++u)
                ok = bundles_equal(u, v, image[u], w);
            if (!ok) continue;
            image[v] = w;
            used[w] = 1;
            self(self, v + 1);
            image[v] = -1;
            used[w] = 0;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
}

// Canonical dart extension of a vertex permutation: within each bundle,
// darts are matched in (label, dart id) order; loop darts keep their
// (min, max) orientation.
GraphAutomorphism canonical_extension(const HalfEdgeGraph& g, const std::vector<Vertex>& f,
                                      bool respect) {
    GraphAutomorphism a;
    a.vertex_perm = f;
    a.dart_perm.assign(g.dart_count(), -1);

    std::map<std::pair<Vertex, Vertex>, std::vector<int>> bundle_edges;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex u = std::min(g.tail(d1), g.tail(d2));
        Vertex v = std::max(g.tail(d1), g.tail(d2));
        bundle_edges[{u, v}].push_back(e);
    }
    auto sorted_bundle = [&](Vertex u, Vertex v) {
        std::vector<int> es = bundle_edges[{std::min(u, v), std::max(u, v)}];
        std::stable_sort(es.begin(), es.end(), [&](int x, int y) {
            return std::make_pair(edge_label(g, x, respect), x) <
                   std::make_pair(edge_label(g, y, respect), y);
        });
        return es;
    };

    for (const auto& [key, _] : bundle_edges) {
        auto [u, v] = key;
        auto src = sorted_bundle(u, v);
        auto dst = sorted_bundle(f[u], f[v]);
        require(src.size() == dst.size(), "Internal", "bundle size mismatch in extension");
        for (size_t i = 0; i < src.size(); ++i) {
            auto [s1, s2] = g.edge_darts(src[i]);
            auto [t1, t2] = g.edge_darts(dst[i]);
            if (u == v) {
                // Loop to loop: keep canonical dart order.
                a.dart_perm[s1] = t1;
                a.dart_perm[s2] = t2;
            } else {
                // Match tails: s1 sits at tail(s1); its image must sit at
                // f(tail(s1)).
                if (f[g.tail(s1)] == g.tail(t1)) {
                    a.dart_perm[s1] = t1;
                    a.dart_perm[s2] = t2;
                } else {
                    a.dart_perm[s1] = t2;
                    a.dart_perm[s2] = t1;
                }
            }
        }
    }
    return a;
}

unsigned long long factorial(unsigned long long k) {
    unsigned long long r = 1;
    for (unsigned long long i = 2; i <= k; ++i) r *= i;
    return r;
}

// |K| where K = dart automorphisms inducing the identity on vertices:
// independent label-preserving permutations within each parallel bundle,
// plus a flip per loop.
unsigned long long kernel_order(const HalfEdgeGraph& g, bool respect) {
    std::map<std::pair<Vertex, Vertex>, std::map<int, int>> label_counts;
    unsigned long long loops_factor = 1;
    std::map<std::pair<Vertex, Vertex>, std::map<int, int>> loop_counts;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex u = std::min(g.tail(d1), g.tail(d2));
        Vertex v = std::max(g.tail(d1), g.tail(d2));
        if (u == v) {
            loop_counts[{u, v}][edge_label(g, e, respect)] += 1;
            loops_factor *= 2;
        } else {
            label_counts[{u, v}][edge_label(g, e, respect)] += 1;
        }
    }
    unsigned long long order = loops_factor;
    for (const auto& [_, counts] : label_counts)
        for (const auto& [label, c] : counts) {
            (void)label;
            order *= factorial(c);
        }
    for (const auto& [_, counts] : loop_counts)
        for (const auto& [label, c] : counts) {
            (void)label;
            order *= factorial(c);
        }
    return order;
}

// Kernel generators: same-label parallel-edge transpositions and loop
// dart flips.
std::vector<GraphAutomorphism> kernel_generators(const HalfEdgeGraph& g, bool respect) {
    std::vector<GraphAutomorphism> gens;
    std::map<std::pair<std::pair<Vertex, Vertex>, int>, std::vector<int>> classes;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex u = std::min(g.tail(d1), g.tail(d2));
        Vertex v = std::max(g.tail(d1), g.tail(d2));
        classes[{{u, v}, edge_label(g, e, respect)}].push_back(e);
        if (u == v) {
            GraphAutomorphism flip = identity_automorphism(g);
            flip.dart_perm[d1] = d2;
            flip.dart_perm[d2] = d1;
            gens.push_back(flip);
        }
    }
    for (const auto& [key, edges] : classes) {
        bool loop = key.first.first == key.first.second;
        for (size_t i = 0; i + 1 < edges.size(); ++i) {
            GraphAutomorphism swap_edges = identity_automorphism(g);
            auto [a1, a2] = g.edge_darts(edges[i]);
            auto [b1, b2] = g.edge_darts(edges[i + 1]);
            if (loop || g.tail(a1) == g.tail(b1)) {
                swap_edges.dart_perm[a1] = b1;
                swap_edges.dart_perm[b1] = a1;
                swap_edges.dart_perm[a2] = b2;
                swap_edges.dart_perm[b2] = a2;
            } else {
                swap_edges.dart_perm[a1] = b2;
                swap_edges.dart_perm[b2] = a1;
                swap_edges.dart_perm[a2] = b1;
                swap_edges.dart_perm[b1] = a2;
            }
            gens.push_back(swap_edges);
        }
    }
    return gens;
}

// Greedy minimal generating subset of a full list of group elements
// (vertex permutations), by repeated closure.
std::vector<std::vector<Vertex>> greedy_generators(const std::vector<std::vector<Vertex>>& all) {
    if (all.empty()) return {};
    const size_t n = all[0].size();
    std::vector<Vertex> id(n);
    for (size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);

    std::vector<std::vector<Vertex>> gens;
    std::set<std::vector<Vertex>> closure{id};
    auto close = [&]() {
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<std::vector<Vertex>> items(closure.begin(), closure.end());
            for (const auto& a : items)
                for (const auto& b : gens) {
                    std::vector<Vertex> c(n);
                    for (size_t i = 0; i < n; ++i) c[i] = b[a[i]];
                    if (closure.insert(c).second) grew = true;
                }
        }
    };
    for (const auto& a : all) {
        if (closure.count(a)) continue;
        gens.push_back(a);
        close();
    }
    return gens;
}

} // namespace

unsigned long long permutation_group_order(int degree, const std::vector<std::vector<int>>& gens) {
    std::vector<std::vector<int>> work;
    for (const auto& p : gens) {
        bool is_id = true;
        for (int i = 0; i < degree; ++i)
            if (p[i] != i) {
                is_id = false;
                break;
            }
        if (!is_id) work.push_back(p);
    }
    if (work.empty()) return 1;

    int beta = -1;
    for (int i = 0; i < degree && beta < 0; ++i)
        for (const auto& p : work)
            if (p[i] != i) {
                beta = i;
                break;
            }

    // Orbit of beta with coset representatives.
    std::map<int, std::vector<int>> transversal;
    std::vector<int> id(degree);
    for (int i = 0; i < degree; ++i) id[i] = i;
    transversal[beta] = id;
    std::vector<int> frontier{beta};
    while (!frontier.empty()) {
        int p = frontier.back();
        frontier.pop_back();
        for (const auto& s : work) {
            int q = s[p];
            if (!transversal.count(q)) {
                std::vector<int> rep(degree);
                for (int i = 0; i < degree; ++i) rep[i] = s[transversal[p][i]];
                transversal[q] = rep;
                frontier.push_back(q);
            }
        }
    }

    // Schreier generators for the stabilizer of beta.
    std::set<std::vector<int>> stab_set;
    for (const auto& [p, u_p] : transversal) {
        for (const auto& s : work) {
            const auto& u_sp = transversal[s[p]];
            std::vector<int> u_sp_inv(degree);
            for (int i = 0; i < degree; ++i) u_sp_inv[u_sp[i]] = i;
            std::vector<int> schreier(degree);
            for (int i = 0; i < degree; ++i) schreier[i] = u_sp_inv[s[u_p[i]]];
            stab_set.insert(schreier);
        }
    }
    std::vector<std::vector<int>> stab_gens(stab_set.begin(), stab_set.end());
    return static_cast<unsigned long long>(transversal.size()) *
           permutation_group_order(degree, stab_gens);
}

std::vector<std::vector<Vertex>> vertex_automorphisms(const HalfEdgeGraph& g,
                                                      bool respect_labels) {
    std::vector<std::vector<Vertex>> out;
    search_vertex_autos(g, respect_labels, out);
    return out;
}

AutomorphismGroup automorphism_group(const HalfEdgeGraph& g, bool respect_labels) {
    auto vperms = vertex_automorphisms(g, respect_labels);
    unsigned long long order =
        static_cast<unsigned long long>(vperms.size()) * kernel_order(g, respect_labels);

    AutomorphismGroup group;
    group.order = order;
    for (const auto& f : greedy_generators(vperms)) {
        auto ext = canonical_extension(g, f, respect_labels);
        require(is_graph_automorphism(g, ext, respect_labels), "Internal",
                "canonical extension is not an automorphism");
        group.generators.push_back(ext);
    }
    for (auto& k : kernel_generators(g, respect_labels)) group.generators.push_back(k);
    std::sort(group.generators.begin(), group.generators.end(),
              [](const GraphAutomorphism& a, const GraphAutomorphism& b) {
                  return std::make_pair(a.vertex_perm, a.dart_perm) <
                         std::make_pair(b.vertex_perm, b.dart_perm);
              });

    // Orbit-stabilizer verification of the analytic count.
    std::vector<std::vector<int>> dart_gens;
    for (const auto& a : group.generators) {
        std::vector<int> p(a.dart_perm.begin(), a.dart_perm.end());
        dart_gens.push_back(p);
    }
    unsigned long long verified = permutation_group_order(g.dart_count(), dart_gens);
    require(verified == order, "Internal",
            "automorphism order mismatch: counted " + std::to_string(order) +
                ", Schreier–Sims gives " + std::to_string(verified));
    return group;
}

bool is_vertex_transitive(const HalfEdgeGraph& g) {
    auto vperms = vertex_automorphisms(g, false);
    std::vector<char> orbit(g.vertex_count(), 0);
    for (const auto& f : vperms) orbit[f[0]] = 1;
    return std::all_of(orbit.begin(), orbit.end(), [](char c) { return c != 0; });
}

IsotropyResult is_isotropic(const HalfEdgeGraph& g) {
    require(g.is_connected(), "BadGraph", "isotropy requires a connected graph");
    IsotropyResult result;

    auto vperms = vertex_automorphisms(g, false);
    std::vector<char> orbit(g.vertex_count(), 0);
    for (const auto& f : vperms) orbit[f[0]] = 1;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (!orbit[v]) {
            result.verdict = false;
            result.inequivalent_vertices = {0, v};
            return result;
        }
    }

    // Local symmetry at the representative vertex 0: every bijection of
    // star(0) must extend. A bijection extends iff (a) its induced
    // neighbor assignment is realized by some automorphism fixing 0 and
    // (b) it commutes with theta on loop darts.
    const Vertex v0 = 0;
    const auto& star0 = g.star(v0);
    const int d = static_cast<int>(star0.size());
    require(d <= 8, "TooLarge", "local symmetry check caps at valence 8");

    std::set<std::vector<Vertex>> stabilizer_images;
    for (const auto& f : vperms)
        if (f[v0] == v0) stabilizer_images.insert(f);

    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    do {
        std::vector<std::pair<Dart, Dart>> beta;
        for (int i = 0; i < d; ++i) beta.emplace_back(star0[i], star0[perm[i]]);

        // Loop darts must stay theta-consistent.
        bool theta_ok = true;
        std::map<Dart, Dart> bmap;
        for (auto [a, b] : beta) bmap[a] = b;
        for (auto [a, b] : beta) {
            if (g.is_loop(a) != g.is_loop(b)) theta_ok = false;
            if (g.is_loop(a) && theta_ok) {
                auto it = bmap.find(g.theta(a));
                if (it == bmap.end() || it->second != g.theta(b)) theta_ok = false;
            }
        }

        // Induced neighbor assignment must be consistent and realized.
        bool realized = false;
        if (theta_ok) {
            std::map<Vertex, Vertex> neighbor_map;
            bool consistent = true;
            for (auto [a, b] : beta) {
                Vertex from = g.head(a), to = g.head(b);
                auto it = neighbor_map.find(from);
                if (it == neighbor_map.end())
                    neighbor_map[from] = to;
                else if (it->second != to)
                    consistent = false;
            }
            if (consistent) {
                for (const auto& f : stabilizer_images) {
                    bool match = true;
                    for (const auto& [from, to] : neighbor_map)
                        if (f[from] != to) {
                            match = false;
                            break;
                        }
                    if (match) {
                        realized = true;
                        break;
                    }
                }
            }
        }
        if (!theta_ok || !realized) {
            result.verdict = false;
            result.failing_injection = beta;
            return result;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    result.verdict = true;
    return result;
}

} // namespace forge
