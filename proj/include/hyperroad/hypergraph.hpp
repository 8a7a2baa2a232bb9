#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hyperroad {

class RoadNetwork;

struct FaceFeatures {
    int size = 0;     // distinct roads in the hyperedge
    double area = 0;  // polygon area, squared projected units
    int sides = 0;    // vertices of the face polygon
};

enum class ClusterFeatures { geometric, size_only };

// Region hypergraph: one hyperedge per bounded face of the road map.
struct Hypergraph {
    std::vector<std::vector<int>> hyperedge_to_roads;  // sorted road indices per hyperedge
    std::vector<std::vector<int>> road_to_hyperedges;  // sorted hyperedge indices per road
    std::vector<int> cluster_labels;                   // in [0, K)
    std::vector<FaceFeatures> features;
    int k = 0;
    ClusterFeatures feature_kind = ClusterFeatures::geometric;

    std::size_t hyperedge_count() const { return hyperedge_to_roads.size(); }
    std::size_t road_count() const { return road_to_hyperedges.size(); }
    std::size_t incidence_count() const;
    bool incident(int road, int hyperedge) const;
    void validate() const;
};

// K-means labels over standardized face features, deterministic per seed.
std::vector<int> cluster_hyperedges(const std::vector<FaceFeatures>& features, int k,
                                    std::uint64_t seed,
                                    ClusterFeatures kind = ClusterFeatures::geometric,
                                    std::vector<double>* objective_history = nullptr);

// One hyperedge per face (deduplicated road sets, faces with < 3 distinct
// roads dropped); features computed from the face polygons; labels assigned
// by cluster_hyperedges.
Hypergraph build_hypergraph(const RoadNetwork& net, const std::vector<std::vector<int>>& faces,
                            int k, std::uint64_t seed,
                            ClusterFeatures kind = ClusterFeatures::geometric);

void save_hypergraph(const Hypergraph& hg, std::ostream& out);
Hypergraph load_hypergraph(std::istream& in, std::size_t n_roads, const std::string& name = "hypergraph");

}  // namespace hyperroad
