#pragma once

#include <cstdint>
#include <vector>

namespace hyperroad {

struct KMeansResult {
    std::vector<int> labels;                // one per point, in [0, k)
    std::vector<std::vector<double>> centers;
    std::vector<double> objective_history;  // WCSS after each Lloyd iteration
};

// Lloyd's algorithm with farthest-point (greedy max-min) seeding from the
// given seed. Deterministic; ties broken toward the lowest index. Empty
// clusters are re-seeded with the point farthest from its center.
// Throws ConfigError when k < 1 or k > number of points.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iters = 300);

}  // namespace hyperroad
