#include "hyperroad/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hyperroad/errors.hpp"
#include "hyperroad/geometry.hpp"
#include "hyperroad/kmeans.hpp"
#include "hyperroad/roadnet.hpp"

#include "json.hpp"

namespace hyperroad {

std::size_t Hypergraph::incidence_count() const {
    std::size_t total = 0;
    for (const auto& r : hyperedge_to_roads) total += r.size();
    return total;
}

bool Hypergraph::incident(int road, int hyperedge) const {
    if (road < 0 || static_cast<std::size_t>(road) >= road_to_hyperedges.size()) return false;
    const auto& hs = road_to_hyperedges[static_cast<std::size_t>(road)];
    return std::binary_search(hs.begin(), hs.end(), hyperedge);
}

void Hypergraph::validate() const {
    const int m = static_cast<int>(hyperedge_count());
    if (cluster_labels.size() != hyperedge_to_roads.size() ||
        features.size() != hyperedge_to_roads.size()) {
        throw ConfigError("hypergraph: per-hyperedge arrays out of sync");
    }
    std::size_t incidences = 0;
    for (int j = 0; j < m; ++j) {
        const auto& roads = hyperedge_to_roads[static_cast<std::size_t>(j)];
        if (roads.size() < 3) {
            throw ConfigError("hypergraph: hyperedge " + std::to_string(j) + " has " +
                              std::to_string(roads.size()) + " roads, need >= 3");
        }
        for (std::size_t t = 0; t < roads.size(); ++t) {
            if (roads[t] < 0 || static_cast<std::size_t>(roads[t]) >= road_to_hyperedges.size()) {
                throw ConfigError("hypergraph: road index out of range in hyperedge " +
                                  std::to_string(j));
            }
            if (t > 0 && roads[t] <= roads[t - 1]) {
                throw ConfigError("hypergraph: hyperedge " + std::to_string(j) +
                                  " road list not sorted/unique");
            }
            if (!incident(roads[t], j)) {
                throw ConfigError("hypergraph: incidence transpose inconsistent at road " +
                                  std::to_string(roads[t]) + ", hyperedge " + std::to_string(j));
            }
        }
        if (k >= 1 && (cluster_labels[static_cast<std::size_t>(j)] < 0 ||
                       cluster_labels[static_cast<std::size_t>(j)] >= k)) {
            throw ConfigError("hypergraph: cluster label out of range at hyperedge " +
                              std::to_string(j));
        }
        if (features[static_cast<std::size_t>(j)].size < 3 ||
            features[static_cast<std::size_t>(j)].sides < 3 ||
            !(features[static_cast<std::size_t>(j)].area > 0.0)) {
            throw ConfigError("hypergraph: invalid features at hyperedge " + std::to_string(j));
        }
        incidences += roads.size();
    }
    std::size_t transposed = 0;
    for (const auto& hs : road_to_hyperedges) {
        for (std::size_t t = 0; t < hs.size(); ++t) {
            if (t > 0 && hs[t] <= hs[t - 1]) {
                throw ConfigError("hypergraph: road_to_hyperedges not sorted/unique");
            }
            if (hs[t] < 0 || hs[t] >= m) {
                throw ConfigError("hypergraph: hyperedge index out of range");
            }
        }
        transposed += hs.size();
    }
    if (transposed != incidences) throw ConfigError("hypergraph: incidence count mismatch");
}

std::vector<int> cluster_hyperedges(const std::vector<FaceFeatures>& features, int k,
                                    std::uint64_t seed, ClusterFeatures kind,
                                    std::vector<double>* objective_history) {
    const std::size_t m = features.size();
    if (k > static_cast<int>(m)) {
        throw ConfigError("cluster_hyperedges: k = " + std::to_string(k) +
                          " exceeds hyperedge count " + std::to_string(m));
    }
    std::vector<std::vector<double>> points(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (kind == ClusterFeatures::size_only) {
            points[j] = {static_cast<double>(features[j].size)};
        } else {
            points[j] = {static_cast<double>(features[j].size), std::log(features[j].area),
                         static_cast<double>(features[j].sides)};
        }
    }
    // z-score standardization per dimension
    const std::size_t dim = points.empty() ? 0 : points[0].size();
    for (std::size_t d = 0; d < dim; ++d) {
        double mean = 0.0;
        for (const auto& p : points) mean += p[d];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
        var /= static_cast<double>(m);
        const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
        for (auto& p : points) p[d] = (p[d] - mean) / sd;
    }
    KMeansResult km = kmeans(points, k, seed);
    if (objective_history) *objective_history = km.objective_history;
    return km.labels;
}

Hypergraph build_hypergraph(const RoadNetwork& net, const std::vector<std::vector<int>>& faces,
                            int k, std::uint64_t seed, ClusterFeatures kind) {
    if (k < 1) throw ConfigError("build_hypergraph: k must be >= 1");
    const Projection proj = Projection::about_centroid(net);

    Hypergraph hg;
    hg.k = k;
    hg.feature_kind = kind;
    hg.road_to_hyperedges.resize(net.size());

    for (const auto& walk : faces) {
        std::vector<int> roads = walk;
        std::sort(roads.begin(), roads.end());
        roads.erase(std::unique(roads.begin(), roads.end()), roads.end());
        if (roads.size() < 3) continue;

        FaceFeatures f;
        f.size = static_cast<int>(roads.size());
        std::vector<ProjectedPoint> polygon;
        polygon.reserve(walk.size());
        for (int r : walk) {
            polygon.push_back(proj(net.roads[static_cast<std::size_t>(r)].lon,
                                   net.roads[static_cast<std::size_t>(r)].lat));
        }
        f.sides = static_cast<int>(polygon.size());
        f.area = polygon_area(polygon);
        if (!(f.area > 0.0)) continue;  // collapsed polygon, not a region

        const int j = static_cast<int>(hg.hyperedge_to_roads.size());
        for (int r : roads) hg.road_to_hyperedges[static_cast<std::size_t>(r)].push_back(j);
        hg.hyperedge_to_roads.push_back(std::move(roads));
        hg.features.push_back(f);
    }
    for (auto& hs : hg.road_to_hyperedges) std::sort(hs.begin(), hs.end());

    if (k > static_cast<int>(hg.hyperedge_count())) {
        throw ConfigError("build_hypergraph: k = " + std::to_string(k) +
                          " exceeds hyperedge count " + std::to_string(hg.hyperedge_count()));
    }
    hg.cluster_labels = cluster_hyperedges(hg.features, k, seed, kind);
    hg.validate();
    return hg;
}

void save_hypergraph(const Hypergraph& hg, std::ostream& out) {
    nlohmann::json j;
    j["k"] = hg.k;
    j["features"] = hg.feature_kind == ClusterFeatures::size_only
                        ? nlohmann::json::array({"size"})
                        : nlohmann::json::array({"size", "log_area", "sides"});
    j["hyperedges"] = nlohmann::json::array();
    for (std::size_t e = 0; e < hg.hyperedge_count(); ++e) {
        j["hyperedges"].push_back({{"roads", hg.hyperedge_to_roads[e]},
                                   {"cluster", hg.cluster_labels[e]},
                                   {"size", hg.features[e].size},
                                   {"area", hg.features[e].area},
                                   {"sides", hg.features[e].sides}});
    }
    out << j.dump(2) << '\n';
}

Hypergraph load_hypergraph(std::istream& in, std::size_t n_roads, const std::string& name) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FileError(name + ": " + e.what());
    }
    Hypergraph hg;
    try {
        hg.k = j.at("k").get<int>();
        const auto feats = j.at("features").get<std::vector<std::string>>();
        hg.feature_kind =
            feats.size() == 1 ? ClusterFeatures::size_only : ClusterFeatures::geometric;
        hg.road_to_hyperedges.resize(n_roads);
        for (const auto& e : j.at("hyperedges")) {
            const int idx = static_cast<int>(hg.hyperedge_to_roads.size());
            std::vector<int> roads = e.at("roads").get<std::vector<int>>();
            std::sort(roads.begin(), roads.end());
            for (int r : roads) {
                if (r < 0 || static_cast<std::size_t>(r) >= n_roads) {
                    throw FileError(name + ": road index " + std::to_string(r) +
                                    " out of range for network of " + std::to_string(n_roads));
                }
                hg.road_to_hyperedges[static_cast<std::size_t>(r)].push_back(idx);
            }
            hg.hyperedge_to_roads.push_back(std::move(roads));
            hg.cluster_labels.push_back(e.at("cluster").get<int>());
            FaceFeatures f;
            f.size = e.at("size").get<int>();
            f.area = e.at("area").get<double>();
            f.sides = e.at("sides").get<int>();
            hg.features.push_back(f);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(name + ": " + e.what());
    }
    for (auto& hs : hg.road_to_hyperedges) std::sort(hs.begin(), hs.end());
    hg.validate();
    return hg;
}

}  // namespace hyperroad
