#include "forge/rotation_map.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "forge/cycles.hpp"
#include "forge/error.hpp"

namespace forge {

RotationMap::RotationMap(HalfEdgeGraph graph, std::vector<Dart> next_at_vertex)
    : graph_(std::move(graph)), next_(std::move(next_at_vertex)) {
    const int D = graph_.dart_count();
    require(static_cast<int>(next_.size()) == D, "BadMap", "rotation size mismatch");
    prev_.assign(D, -1);
    std::vector<char> hit(D, 0);
    for (Dart d = 0; d < D; ++d) {
        require(next_[d] >= 0 && next_[d] < D, "BadMap", "rotation out of range");
        require(graph_.tail(next_[d]) == graph_.tail(d), "BadMap",
                "rotation must stay within the star");
        require(!hit[next_[d]], "BadMap", "rotation is not a permutation");
        hit[next_[d]] = 1;
        prev_[next_[d]] = d;
    }
    // Each star must be a single rotation cycle.
    for (Vertex v = 0; v < graph_.vertex_count(); ++v) {
        const auto& star = graph_.star(v);
        if (star.empty()) continue;
        int steps = 0;
        Dart d = star[0];
        do {
            d = next_[d];
            ++steps;
        } while (d != star[0] && steps <= static_cast<int>(star.size()));
        require(steps == static_cast<int>(star.size()), "BadMap",
                "star of vertex " + std::to_string(v) + " is not a single rotation cycle");
    }
    // Face orbits.
    face_of_.assign(D, -1);
    for (Dart d0 = 0; d0 < D; ++d0) {
        if (face_of_[d0] != -1) continue;
        std::vector<Dart> face;
        Dart d = d0;
        do {
            face.push_back(d);
            face_of_[d] = static_cast<int>(faces_.size());
            d = face_step(d);
        } while (d != d0);
        faces_.push_back(std::move(face));
    }
}

std::string RotationMap::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(graph_.to_json());
    auto& rot = j["rotation"] = nlohmann::ordered_json::array();
    for (Dart d = 0; d < graph_.dart_count(); ++d) rot.push_back({d, next_[d]});
    return j.dump(2);
}

RotationMap RotationMap::from_json(const std::string& text) {
    HalfEdgeGraph g = HalfEdgeGraph::from_json(text);
    nlohmann::json j = nlohmann::json::parse(text);
    require(j.contains("rotation"), "IoError", "map document must contain a rotation");
    std::vector<Dart> next(g.dart_count(), -1);
    for (const auto& pair : j["rotation"]) next[pair[0].get<int>()] = pair[1].get<int>();
    return RotationMap(std::move(g), std::move(next));
}

MapType map_type(const RotationMap& m) {
    const auto& g = m.graph();
    require(g.vertex_count() > 0 && g.dart_count() > 0, "NotUniformType", "empty map");
    int q = g.valence(0);
    for (Vertex v = 1; v < g.vertex_count(); ++v)
        require(g.valence(v) == q, "NotUniformType", "valences vary");
    int p = static_cast<int>(m.faces()[0].size());
    for (const auto& f : m.faces())
        require(static_cast<int>(f.size()) == p, "NotUniformType", "face lengths vary");
    return MapType{p, q};
}

int map_genus(const RotationMap& m) {
    require(m.graph().is_connected(), "BadMap", "genus needs a connected map");
    int chi = m.graph().vertex_count() - m.graph().edge_count() +
              static_cast<int>(m.faces().size());
    require(chi % 2 == 0, "BadMap", "odd Euler characteristic");
    return (2 - chi) / 2;
}

MapGirth map_girth(const RotationMap& m) {
    MapGirth out;
    out.girth = girth_length(m.graph());
    int p = static_cast<int>(m.faces()[0].size());
    for (const auto& f : m.faces()) p = std::min(p, static_cast<int>(f.size()));
    out.equals_face_length = (out.girth == p);
    return out;
}

namespace {

// Map-automorphisms are rigid: the image of one dart and an orientation
// sign determine the whole dart permutation, by propagating
// phi(next(d)) = next^{±1}(phi(d)) and phi(theta(d)) = theta(phi(d)).
std::vector<std::pair<std::vector<Dart>, bool>> map_automorphisms(const RotationMap& m) {
    const auto& g = m.graph();
    const int D = g.dart_count();
    std::vector<std::pair<std::vector<Dart>, bool>> out;
    if (D == 0) return out;

    for (Dart image0 = 0; image0 < D; ++image0) {
        for (int reversing = 0; reversing < 2; ++reversing) {
            std::vector<Dart> phi(D, -1);
            phi[0] = image0;
            std::vector<Dart> stack{0};
            bool ok = true;
            auto assign = [&](Dart from, Dart to) {
                if (phi[from] == -1) {
                    phi[from] = to;
                    stack.push_back(from);
                    return true;
                }
                return phi[from] == to;
            };
            while (ok && !stack.empty()) {
                Dart d = stack.back();
                stack.pop_back();
                Dart e = phi[d];
                if (!assign(g.theta(d), g.theta(e))) ok = false;
                if (ok) {
                    Dart rot_image = reversing ? m.prev(e) : m.next(e);
                    if (!assign(m.next(d), rot_image)) ok = false;
                }
            }
            if (!ok) continue;
            std::vector<char> used(D, 0);
            for (Dart d = 0; d < D && ok; ++d) {
                if (phi[d] < 0 || used[phi[d]]) ok = false;
                else used[phi[d]] = 1;
            }
            if (!ok) continue;
            // Vertex consistency follows from rotation consistency, but
            // check cheaply anyway.
            std::vector<Vertex> vmap(g.vertex_count(), -1);
            for (Dart d = 0; d < D && ok; ++d) {
                Vertex v = g.tail(d), w = g.tail(phi[d]);
                if (vmap[v] == -1) vmap[v] = w;
                else if (vmap[v] != w) ok = false;
            }
            if (ok) out.emplace_back(std::move(phi), reversing != 0);
        }
    }
    return out;
}

} // namespace

FlagTransitivity is_flag_transitive(const RotationMap& m) {
    const auto& g = m.graph();
    const int D = g.dart_count();
    auto autos = map_automorphisms(m);

    // Flags: (dart, side); side 1 is the face across theta. An
    // orientation-reversing automorphism swaps the sides.
    auto flag_id = [&](Dart d, int side) { return 2 * d + side; };
    std::vector<int> parent(2 * D);
    for (int i = 0; i < 2 * D; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (const auto& [phi, reversing] : autos)
        for (Dart d = 0; d < D; ++d)
            for (int side = 0; side < 2; ++side)
                unite(flag_id(d, side), flag_id(phi[d], reversing ? 1 - side : side));

    std::set<int> roots;
    for (int i = 0; i < 2 * D; ++i) roots.insert(find(i));

    FlagTransitivity out;
    out.orbit_count = static_cast<int>(roots.size());
    out.verdict = out.orbit_count == 1;
    out.map_automorphism_count = autos.size();
    return out;
}

RotationMap dual_map(const RotationMap& m) {
    const auto& g = m.graph();
    std::vector<Vertex> vertex_of(g.dart_count());
    std::vector<Dart> theta(g.dart_count());
    for (Dart d = 0; d < g.dart_count(); ++d) {
        vertex_of[d] = m.face_of(d);
        theta[d] = g.theta(d);
    }
    HalfEdgeGraph dual_graph(static_cast<int>(m.faces().size()), std::move(theta),
                             std::move(vertex_of));
    std::vector<Dart> next(g.dart_count());
    for (Dart d = 0; d < g.dart_count(); ++d) next[d] = m.face_step(d);
    return RotationMap(std::move(dual_graph), std::move(next));
}

RotationMap map_from_oriented_faces(int vertex_count,
                                    const std::vector<std::vector<Vertex>>& faces) {
    // Darts numbered by (face, position); theta pairs the two traversals
    // of each undirected edge.
    std::vector<std::pair<Vertex, Vertex>> directed;
    for (const auto& f : faces) {
        require(f.size() >= 2, "BadMap", "face too short");
        for (size_t i = 0; i < f.size(); ++i)
            directed.emplace_back(f[i], f[(i + 1) % f.size()]);
    }
    const int D = static_cast<int>(directed.size());
    std::map<std::pair<Vertex, Vertex>, Dart> by_arc;
    for (Dart d = 0; d < D; ++d) {
        require(directed[d].first != directed[d].second, "BadMap",
                "face tables cannot express loops");
        require(!by_arc.count(directed[d]), "BadMap",
                "directed edge used twice; faces are not consistently oriented");
        by_arc[directed[d]] = d;
    }
    std::vector<Dart> theta(D, -1);
    std::vector<Vertex> vertex_of(D);
    for (Dart d = 0; d < D; ++d) {
        vertex_of[d] = directed[d].first;
        auto it = by_arc.find({directed[d].second, directed[d].first});
        require(it != by_arc.end(), "BadMap", "unmatched directed edge; not a closed surface");
        theta[d] = it->second;
    }
    HalfEdgeGraph g(vertex_count, std::move(theta), std::move(vertex_of));
    // next = face_step ∘ theta: with T known from the face tables.
    std::vector<Dart> face_succ(D);
    int at = 0;
    for (const auto& f : faces) {
        int len = static_cast<int>(f.size());
        for (int i = 0; i < len; ++i) face_succ[at + i] = at + (i + 1) % len;
        at += len;
    }
    std::vector<Dart> next(D);
    for (Dart d = 0; d < D; ++d) next[d] = face_succ[g.theta(d)];
    return RotationMap(std::move(g), std::move(next));
}

namespace {

RotationMap beach_ball(int q) {
    require(q >= 2, "BadMap", "beach ball needs q >= 2");
    // Darts 2i at vertex 0, 2i+1 at vertex 1 (theta partners).
    std::vector<Dart> theta(2 * q), next(2 * q);
    std::vector<Vertex> vertex_of(2 * q);
    for (int i = 0; i < q; ++i) {
        theta[2 * i] = 2 * i + 1;
        theta[2 * i + 1] = 2 * i;
        vertex_of[2 * i] = 0;
        vertex_of[2 * i + 1] = 1;
        next[2 * i] = 2 * ((i + 1) % q);         // ascending at vertex 0
        next[2 * i + 1] = 2 * ((i + q - 1) % q) + 1; // descending at vertex 1
    }
    return RotationMap(HalfEdgeGraph(2, std::move(theta), std::move(vertex_of)),
                       std::move(next));
}

RotationMap torus_grid(int n) {
    require(n >= 1, "BadMap", "torus grid needs n >= 1");
    require(n >= 3, "BadMap", "torus grid smaller than 3x3 needs loops or parallel edges");
    // Vertex (i, j) -> i*n + j. Darts: 4 per vertex: 0=E, 1=N, 2=W, 3=S.
    auto vid = [&](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
    auto did = [&](int v, int dir) { return 4 * v + dir; };
    const int V = n * n, D = 4 * V;
    std::vector<Dart> theta(D), next(D);
    std::vector<Vertex> vertex_of(D);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int v = vid(i, j);
            for (int dir = 0; dir < 4; ++dir) {
                vertex_of[did(v, dir)] = v;
                next[did(v, dir)] = did(v, (dir + 1) % 4);
            }
            theta[did(v, 0)] = did(vid(i, j + 1), 2);
            theta[did(v, 2)] = did(vid(i, j - 1), 0);
            theta[did(v, 1)] = did(vid(i + 1, j), 3);
            theta[did(v, 3)] = did(vid(i - 1, j), 1);
        }
    return RotationMap(HalfEdgeGraph(V, std::move(theta), std::move(vertex_of)),
                       std::move(next));
}

const std::vector<std::vector<Vertex>>& tetrahedron_faces() {
    static const std::vector<std::vector<Vertex>> f = {
        {0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    return f;
}

const std::vector<std::vector<Vertex>>& cube_faces() {
    static const std::vector<std::vector<Vertex>> f = {
        {0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    return f;
}

const std::vector<std::vector<Vertex>>& octahedron_faces() {
    static const std::vector<std::vector<Vertex>> f = {
        {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return f;
}

const std::vector<std::vector<Vertex>>& icosahedron_faces() {
    // Vertex 0 on top, ring 1-5, ring 6-10, vertex 11 at the bottom.
    static const std::vector<std::vector<Vertex>> f = {
        {0, 1, 2},   {0, 2, 3},  {0, 3, 4},  {0, 4, 5},  {0, 5, 1},
        {1, 6, 2},   {2, 6, 7},  {2, 7, 3},  {3, 7, 8},  {3, 8, 4},
        {4, 8, 9},   {4, 9, 5},  {5, 9, 10}, {5, 10, 1}, {1, 10, 6},
        {11, 7, 6},  {11, 8, 7}, {11, 9, 8}, {11, 10, 9}, {11, 6, 10}};
    return f;
}

} // namespace

RotationMap catalog_map(const std::string& name, int param) {
    if (name == "tetrahedron") return map_from_oriented_faces(4, tetrahedron_faces());
    if (name == "cube") return map_from_oriented_faces(8, cube_faces());
    if (name == "octahedron") return map_from_oriented_faces(6, octahedron_faces());
    if (name == "icosahedron") return map_from_oriented_faces(12, icosahedron_faces());
    if (name == "dodecahedron") return dual_map(map_from_oriented_faces(12, icosahedron_faces()));
    if (name == "beach_ball") return beach_ball(param);
    // The two-vertex map with bigon faces; same dipole as the beach ball,
    // named separately because it arises as a gluing pattern rather than a
    // subdivision of the sphere.
    if (name == "theta_map") return beach_ball(param);
    if (name == "torus_grid") return torus_grid(param);
    fail("UnknownName", "no catalog map named '" + name + "'");
}

} // namespace forge
