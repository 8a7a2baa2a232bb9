#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hyperroad/config.hpp"
#include "hyperroad/rng.hpp"

namespace hyperroad {

struct Hypergraph;

// All-pairs unweighted hop distances. kUnreachable marks disconnected pairs,
// which are excluded from distance-based sampling support.
struct DistanceTables {
    static constexpr std::uint16_t kUnreachable = 0xFFFF;
    int n = 0;
    std::vector<std::uint16_t> d_g;  // n x n, row-major

    std::uint16_t at(int i, int j) const {
        return d_g[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + j];
    }
    // mean hop distance from road i to a road set; negative if any member unreachable
    double to_road_set(int i, const std::vector<int>& roads) const;
};

// BFS from every road over the given neighbor sets. Refuses above node_cap.
DistanceTables build_dbs_tables(const std::vector<std::vector<int>>& neighbor_sets, int node_cap);

// Negative draws for one loss evaluation, frozen so a loss can be recomputed
// (gradient checks, alpha sweeps) without touching RNG state.
struct GraphBatch {
    std::vector<std::pair<int, int>> positives;  // (i, j) with j in N_i
    std::vector<std::vector<int>> negatives;     // per pair, drawn nodes
    std::vector<char> skipped;                   // pair had empty support
    std::size_t consumed() const;
};

struct HyperBatch {
    std::vector<std::pair<int, int>> positives;  // (road, hyperedge) with H[i][j] = 1
    std::vector<std::vector<int>> negatives;     // per pair, drawn hyperedges
    std::vector<char> skipped;
    std::size_t consumed() const;
};

class NegativeSampler {
public:
    NegativeSampler(std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets,
                    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road,
                    int n_hyperedges, SamplerVariant variant, int n_g, int n_h,
                    std::uint64_t seed);

    // required before sampling with the dbs variant
    void attach_distances(std::shared_ptr<const DistanceTables> tables,
                          const Hypergraph& hg);

    // support: V \ N_i \ {i}; false when the support is empty
    bool sample_nodes(int anchor, std::vector<int>& out);
    // support: E_H \ H_i; false when the support is empty
    bool sample_hyperedges(int anchor, std::vector<int>& out);

    GraphBatch draw_graph_batch(const std::vector<std::pair<int, int>>& positives);
    HyperBatch draw_hyper_batch(const std::vector<std::pair<int, int>>& positives);

    SamplerVariant variant() const { return variant_; }
    int n_g() const { return n_g_; }
    int n_h() const { return n_h_; }

private:
    bool in_neighbors(int anchor, int node) const;
    bool in_hyperedges(int anchor, int hyperedge) const;

    std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets_;
    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road_;
    int n_roads_;
    int n_hyperedges_;
    SamplerVariant variant_;
    int n_g_;
    int n_h_;
    Rng rng_;
    std::shared_ptr<const DistanceTables> dist_;
    const Hypergraph* hg_ = nullptr;  // road sets for D_H, dbs only
};

}  // namespace hyperroad
