#include "forge/block.hpp"

#include <algorithm>

#include "forge/cycles.hpp"
#include "forge/error.hpp"

namespace forge {

int Block::corner_blue_side(int corner) const {
    int t = tile_of(corner), k = local(corner);
    int side = (k % 2 == 0) ? k : k - 1;
    return t * 2 * q + side;
}

int Block::corner_red_side(int corner) const {
    int t = tile_of(corner), k = local(corner);
    int side = (k % 2 == 0) ? (k + 2 * q - 1) % (2 * q) : k;
    return t * 2 * q + side;
}

int Block::corner_blue_mate(int corner) const {
    int k = local(corner);
    int side = corner_blue_side(corner);
    int partner = blue_partner[side];
    int pt = tile_of(partner), pk = local(partner);
    // Orientation-reversing: start corner <-> end corner.
    bool is_start = (k % 2 == 0); // corner k is the start of blue side k exactly when even
    int mate_local = is_start ? (pk + 1) % (2 * q) : pk;
    return pt * 2 * q + mate_local;
}

Block build_block(const RotationMap& m) {
    Block b;
    b.map = m;
    MapType t = map_type(m);
    require(t.q >= 3, "TypeError", "blocks need maps of type {p,q} with q >= 3");
    b.p = t.p;
    b.q = t.q;
    b.d = static_cast<int>(m.faces().size());
    MapGirth mg = map_girth(m);
    b.girth_equals_p = mg.equals_face_length;

    const auto& g = m.graph();
    const int twoq = 2 * b.q;
    b.slot_dart.assign(g.vertex_count() * twoq, -1);
    b.dart_slot.assign(g.dart_count(), -1);

    // Rotation order at each tile, starting from the minimal dart.
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        Dart start = g.star(u)[0];
        Dart d = start;
        for (int i = 0; i < b.q; ++i) {
            int slot = u * twoq + 2 * i;
            b.slot_dart[slot] = d;
            b.dart_slot[d] = slot;
            d = m.next(d);
        }
        require(d == start, "BadMap", "rotation does not close");
    }

    b.blue_partner.assign(g.vertex_count() * twoq, -1);
    for (Dart d = 0; d < g.dart_count(); ++d)
        b.blue_partner[b.dart_slot[d]] = b.dart_slot[g.theta(d)];

    // Boundary components follow the face orbits: the red slot just before
    // the blue slot of dart a, then on to T(a).
    auto red_before = [&](Dart a) {
        int slot = b.dart_slot[a];
        int u = slot / twoq, k = slot % twoq;
        return u * twoq + (k + twoq - 1) % twoq;
    };
    b.red_boundary.assign(g.vertex_count() * twoq, -1);
    b.red_position.assign(g.vertex_count() * twoq, -1);
    for (const auto& face : m.faces()) {
        std::vector<int> cycle;
        for (Dart a : face) cycle.push_back(red_before(a));
        int j = static_cast<int>(b.boundary.size());
        for (size_t i = 0; i < cycle.size(); ++i) {
            require(b.red_boundary[cycle[i]] == -1, "Internal",
                    "red slot visited by two boundary walks");
            b.red_boundary[cycle[i]] = j;
            b.red_position[cycle[i]] = static_cast<int>(i);
        }
        b.boundary.push_back(std::move(cycle));
    }
    for (int slot = 0; slot < b.slots(); ++slot)
        if (!b.slot_is_blue(slot))
            require(b.red_boundary[slot] != -1, "Internal", "red slot missed by boundary walks");

    // Sanity: consecutive red slots must share a corner through the blue
    // gluing (the boundary is locally smooth).
    for (const auto& cycle : b.boundary) {
        for (size_t i = 0; i < cycle.size(); ++i) {
            int r1 = cycle[i], r2 = cycle[(i + 1) % cycle.size()];
            int end_corner = b.tile_of(r1) * twoq + (b.local(r1) + 1) % twoq;
            int mate = b.corner_blue_mate(end_corner);
            require(b.corner_red_side(mate) == r2, "Internal",
                    "boundary walk does not chain red slots");
        }
    }
    return b;
}

} // namespace forge
