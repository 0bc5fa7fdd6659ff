#include "forge/cycles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "forge/error.hpp"

namespace forge {

namespace {

std::vector<Dart> reversed_walk(const HalfEdgeGraph& g, const std::vector<Dart>& darts) {
    std::vector<Dart> rev(darts.rbegin(), darts.rend());
    for (Dart& d : rev) d = g.theta(d);
    return rev;
}

std::vector<Dart> min_rotation(const std::vector<Dart>& w) {
    std::vector<Dart> best = w;
    std::vector<Dart> cur = w;
    for (size_t i = 1; i < w.size(); ++i) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

} // namespace

bool is_closed_dart_walk(const HalfEdgeGraph& g, const std::vector<Dart>& darts) {
    if (darts.empty()) return false;
    for (size_t i = 0; i < darts.size(); ++i) {
        Dart a = darts[i], b = darts[(i + 1) % darts.size()];
        if (g.head(a) != g.tail(b)) return false;
    }
    return true;
}

bool is_backtrack_free(const HalfEdgeGraph& g, const std::vector<Dart>& darts) {
    for (size_t i = 0; i < darts.size(); ++i)
        if (darts[(i + 1) % darts.size()] == g.theta(darts[i])) return false;
    return true;
}

Cycle canonical_cycle(const HalfEdgeGraph& g, std::vector<Dart> darts) {
    require(is_closed_dart_walk(g, darts), "BadCycle", "dart sequence is not a closed walk");
    require(is_backtrack_free(g, darts), "BadCycle", "cycle has a backtrack");
    std::vector<Dart> fwd = min_rotation(darts);
    std::vector<Dart> bwd = min_rotation(reversed_walk(g, darts));
    return Cycle{fwd < bwd ? fwd : bwd};
}

int girth_length(const HalfEdgeGraph& g) {
    require(g.vertex_count() > 0, "NoCycle", "empty graph");
    for (Dart d = 0; d < g.dart_count(); ++d)
        if (g.is_loop(d)) return 1;

    int best = -1;
    // Shortest cycle through each edge = 1 + shortest path between its
    // endpoints avoiding that edge.
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [d1, d2] = g.edge_darts(e);
        Vertex src = g.tail(d1), dst = g.tail(d2);
        std::vector<int> dist(g.vertex_count(), -1);
        std::deque<Vertex> queue{src};
        dist[src] = 0;
        while (!queue.empty()) {
            Vertex v = queue.front();
            queue.pop_front();
            if (v == dst) break;
            for (Dart d : g.star(v)) {
                if (d == d1 || d == d2) continue;
                Vertex w = g.head(d);
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if (dist[dst] >= 0) {
            int len = dist[dst] + 1;
            if (best < 0 || len < best) best = len;
        }
    }
    require(best > 0, "NoCycle", "graph is a forest");
    require(best <= kGirthCap, "TooLarge", "girth exceeds the supported cap");
    return best;
}

namespace {

// All embedded cycles of exactly the given length, canonical and deduped.
// DFS from each start vertex, visiting only larger vertices in between so
// each cycle is found from its minimal vertex.
void enumerate_cycles_of_length(const HalfEdgeGraph& g, int len, std::set<Cycle>& out) {
    if (len == 1) {
        for (Dart d = 0; d < g.dart_count(); ++d)
            if (g.is_loop(d)) out.insert(canonical_cycle(g, {d}));
        return;
    }
    std::vector<Dart> path;
    std::vector<char> used(g.vertex_count(), 0);

    auto dfs = [&](auto&& self, Vertex v0, Vertex v) -> void {
        if (static_cast<int>(path.size()) == len - 1) {
            for (Dart d : g.star(v)) {
                if (g.head(d) != v0) continue;
                if (d == g.theta(path.back())) continue;
                if (g.theta(d) == path.front()) continue; // closing backtrack at v0
                path.push_back(d);
                out.insert(canonical_cycle(g, path));
                path.pop_back();
            }
            return;
        }
        for (Dart d : g.star(v)) {
            Vertex w = g.head(d);
            if (w <= v0 || used[w]) continue;
            if (!path.empty() && d == g.theta(path.back())) continue;
            used[w] = 1;
            path.push_back(d);
            self(self, v0, w);
            path.pop_back();
            used[w] = 0;
        }
    };

    for (Vertex v0 = 0; v0 < g.vertex_count(); ++v0) {
        path.clear();
        dfs(dfs, v0, v0);
    }
}

} // namespace

GirthResult girth(const HalfEdgeGraph& g) {
    GirthResult result;
    result.length = girth_length(g);
    std::set<Cycle> cycles;
    enumerate_cycles_of_length(g, result.length, cycles);
    result.witnesses.assign(cycles.begin(), cycles.end());
    require(!result.witnesses.empty(), "NoCycle", "internal: girth found but no witness");
    return result;
}

std::vector<Cycle> enumerate_embedded_cycles(const HalfEdgeGraph& g, int max_len) {
    std::set<Cycle> out;
    for (int len = 1; len <= max_len; ++len) enumerate_cycles_of_length(g, len, out);
    return {out.begin(), out.end()};
}

std::vector<std::pair<Dart, Dart>> embedded_two_paths(const HalfEdgeGraph& g) {
    std::set<std::pair<Dart, Dart>> out;
    for (Dart d1 = 0; d1 < g.dart_count(); ++d1) {
        if (g.is_loop(d1)) continue;
        Vertex mid = g.head(d1);
        for (Dart d2 : g.star(mid)) {
            if (d2 == g.theta(d1) || g.is_loop(d2)) continue;
            std::pair<Dart, Dart> fwd{d1, d2};
            std::pair<Dart, Dart> rev{g.theta(d2), g.theta(d1)};
            out.insert(std::min(fwd, rev));
        }
    }
    return {out.begin(), out.end()};
}

std::vector<int> two_path_girth_cycle_counts(const HalfEdgeGraph& g,
                                             const std::vector<std::pair<Dart, Dart>>& paths,
                                             const std::vector<Cycle>& girth_cycles) {
    std::map<std::pair<Dart, Dart>, int> counts;
    for (const Cycle& c : girth_cycles) {
        const auto& w = c.darts;
        if (w.size() < 2) continue;
        for (size_t i = 0; i < w.size(); ++i) {
            Dart a = w[i], b = w[(i + 1) % w.size()];
            std::pair<Dart, Dart> fwd{a, b};
            std::pair<Dart, Dart> rev{g.theta(b), g.theta(a)};
            counts[std::min(fwd, rev)] += 1;
        }
    }
    std::vector<int> result;
    result.reserve(paths.size());
    for (const auto& p : paths) {
        auto it = counts.find(p);
        result.push_back(it == counts.end() ? 0 : it->second);
    }
    return result;
}

StrictPolygonalResult is_strict_polygonal(const HalfEdgeGraph& g) {
    GirthResult gr = girth(g);
    auto paths = embedded_two_paths(g);
    auto counts = two_path_girth_cycle_counts(g, paths, gr.witnesses);
    StrictPolygonalResult result;
    result.verdict = true;
    for (size_t i = 0; i < paths.size(); ++i) {
        if (counts[i] != 1) {
            result.verdict = false;
            result.witness = paths[i];
            result.witness_cycle_count = counts[i];
            return result;
        }
    }
    return result;
}

} // namespace forge
