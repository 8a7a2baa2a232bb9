#pragma once

#include <vector>

#include "hyperroad/geometry.hpp"

namespace hyperroad {

class RoadNetwork;

// One face of the planar embedding: roads in cyclic walk order (consecutive
// duplicates collapsed) plus the signed area of the traversal polygon.
struct FaceWalk {
    std::vector<int> roads;
    double signed_area = 0.0;
    int component = 0;
    bool outer = false;
};

// Full traversal result, kept for invariant checks: every directed half-edge
// of the traversal graph is consumed by exactly one walk.
struct FaceTrace {
    std::vector<FaceWalk> walks;            // all faces including outer ones
    std::size_t half_edges_total = 0;       // 2 * (traversal-graph edge count)
    std::size_t half_edges_consumed = 0;    // summed walk lengths
    int components = 0;
};

FaceTrace trace_faces(const RoadNetwork& net, const Projection& proj);

// Bounded faces only, each a cyclic sequence of road indices.
// Requires a symmetrized network; throws ConfigError on degenerate geometry
// (two incident half-edges at identical bearing).
std::vector<std::vector<int>> extract_faces(const RoadNetwork& net);

}  // namespace hyperroad
