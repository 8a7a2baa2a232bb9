#include "hyperroad/kmeans.hpp"

#include <cmath>
#include <limits>

#include "hyperroad/errors.hpp"
#include "hyperroad/rng.hpp"

namespace hyperroad {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iters) {
    const int n = static_cast<int>(points.size());
    if (k < 1) throw ConfigError("kmeans: k must be >= 1, got " + std::to_string(k));
    if (k > n) {
        throw ConfigError("kmeans: k = " + std::to_string(k) + " exceeds point count " +
                          std::to_string(n));
    }
    const std::size_t dim = points.empty() ? 0 : points[0].size();

    KMeansResult res;
    res.centers.reserve(static_cast<std::size_t>(k));

    // farthest-point seeding
    Rng rng(seed);
    std::vector<double> min_d(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    int first = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
    res.centers.push_back(points[static_cast<std::size_t>(first)]);
    while (static_cast<int>(res.centers.size()) < k) {
        int best = -1;
        double best_d = -1.0;
        #pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double d = sq_dist(points[static_cast<std::size_t>(i)], res.centers.back());
            if (d < min_d[static_cast<std::size_t>(i)]) min_d[static_cast<std::size_t>(i)] = d;
        }
        for (int i = 0; i < n; ++i) {
            if (min_d[static_cast<std::size_t>(i)] > best_d) {
                best_d = min_d[static_cast<std::size_t>(i)];
                best = i;
            }
        }
        res.centers.push_back(points[static_cast<std::size_t>(best)]);
    }

    res.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> point_d(static_cast<std::size_t>(n));
    std::vector<char> moved(static_cast<std::size_t>(n));
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<int> counts(static_cast<std::size_t>(k));

    for (int iter = 0; iter < max_iters; ++iter) {
        // assignment; WCSS summed in index order so the history is
        // independent of the thread count
        #pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points[static_cast<std::size_t>(i)], res.centers[0]);
            for (int c = 1; c < k; ++c) {
                const double d = sq_dist(points[static_cast<std::size_t>(i)],
                                         res.centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            moved[static_cast<std::size_t>(i)] = res.labels[static_cast<std::size_t>(i)] != best;
            res.labels[static_cast<std::size_t>(i)] = best;
            point_d[static_cast<std::size_t>(i)] = best_d;
        }
        bool changed = false;
        double wcss = 0.0;
        for (int i = 0; i < n; ++i) {
            changed = changed || moved[static_cast<std::size_t>(i)];
            wcss += point_d[static_cast<std::size_t>(i)];
        }
        res.objective_history.push_back(wcss);
        if (!changed && iter > 0) break;

        // update
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int c = res.labels[static_cast<std::size_t>(i)];
            ++counts[static_cast<std::size_t>(c)];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[static_cast<std::size_t>(c) * dim + d] += points[static_cast<std::size_t>(i)][d];
            }
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) {
                // relocate to the point farthest from its assigned center
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = sq_dist(
                        points[static_cast<std::size_t>(i)],
                        res.centers[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(i)])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                res.centers[static_cast<std::size_t>(c)] = points[static_cast<std::size_t>(far)];
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                res.centers[static_cast<std::size_t>(c)][d] =
                    sums[static_cast<std::size_t>(c) * dim + d] /
                    static_cast<double>(counts[static_cast<std::size_t>(c)]);
            }
        }
    }
    return res;
}

}  // namespace hyperroad
