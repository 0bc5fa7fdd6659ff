#pragma once

#include <vector>

#include "forge/rotation_map.hpp"

namespace forge {

// The building block: one 2q-gon tile per vertex of a {p,q} map, blue
// sides glued in pairs along the map's edges, red sides forming d = |faces|
// boundary circles of p red sides each.
//
// Tile u (a vertex of M) has 2q side slots and 2q corner slots, both
// indexed u*2q + k. Side k runs from corner k to corner k+1; even slots
// are blue, odd slots are red. Blue slot 2i carries the i-th dart of the
// rotation at u, starting from the minimal dart; the red slot between two
// consecutive blue slots precedes the later one.
//
// Blue gluings are orientation-reversing: the start corner of one side
// meets the end corner of its partner.
struct Block {
    RotationMap map;
    int p = 0, q = 0, d = 0;
    bool girth_equals_p = false;

    std::vector<int> dart_slot;          // dart -> its blue side slot id
    std::vector<Dart> slot_dart;         // even slot id -> dart (-1 on red slots)
    std::vector<int> blue_partner;       // even slot id -> partner even slot id

    // boundary[j] = the p red slot ids of boundary component j, in
    // boundary-walk order (surface on the left), aligned with face j of
    // the map: walking past red slot boundary[j][m], the walk crosses the
    // blue side of the m-th dart of face j's orbit.
    std::vector<std::vector<int>> boundary;
    std::vector<int> red_boundary;       // red slot id -> boundary index
    std::vector<int> red_position;       // red slot id -> position in its boundary

    int tiles() const { return map.graph().vertex_count(); }
    int slots() const { return tiles() * 2 * q; }
    int tile_of(int slot) const { return slot / (2 * q); }
    int local(int slot) const { return slot % (2 * q); }
    bool slot_is_blue(int slot) const { return local(slot) % 2 == 0; }

    // Corner k sits between side k-1 and side k of its tile. Its blue side
    // is k (k even) or k-1 (k odd); its red side is the other one.
    int corner_blue_side(int corner) const;
    int corner_red_side(int corner) const;
    // The corner identified with this one by the blue gluing.
    int corner_blue_mate(int corner) const;
};

// Throws TypeError if q < 3; NotUniformType if the map is not {p,q}.
// Girth below p only clears the girth_equals_p flag.
Block build_block(const RotationMap& m);

} // namespace forge
