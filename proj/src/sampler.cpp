#include "hyperroad/sampler.hpp"

#include <algorithm>
#include <deque>
#include <iostream>
#include <string>

#include "hyperroad/errors.hpp"
#include "hyperroad/hypergraph.hpp"

namespace hyperroad {

double DistanceTables::to_road_set(int i, const std::vector<int>& roads) const {
    if (roads.empty()) return -1.0;
    double acc = 0.0;
    for (int r : roads) {
        const std::uint16_t d = at(i, r);
        if (d == kUnreachable) return -1.0;
        acc += static_cast<double>(d);
    }
    return acc / static_cast<double>(roads.size());
}

DistanceTables build_dbs_tables(const std::vector<std::vector<int>>& neighbor_sets, int node_cap) {
    const int n = static_cast<int>(neighbor_sets.size());
    if (n > node_cap) {
        throw ConfigError("distance-based sampling needs all-pairs BFS; network of " +
                          std::to_string(n) + " roads exceeds the node cap of " +
                          std::to_string(node_cap));
    }
    DistanceTables t;
    t.n = n;
    t.d_g.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                 DistanceTables::kUnreachable);

    #pragma omp parallel for schedule(dynamic, 16)
    for (int s = 0; s < n; ++s) {
        std::uint16_t* row = t.d_g.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(n);
        row[s] = 0;
        std::deque<int> frontier{s};
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop_front();
            const std::uint16_t dv = row[v];
            for (int w : neighbor_sets[static_cast<std::size_t>(v)]) {
                if (row[w] == DistanceTables::kUnreachable) {
                    row[w] = static_cast<std::uint16_t>(dv + 1);
                    frontier.push_back(w);
                }
            }
        }
    }
    return t;
}

std::size_t GraphBatch::consumed() const {
    std::size_t c = 0;
    for (char s : skipped) c += s ? 0 : 1;
    return c;
}

std::size_t HyperBatch::consumed() const {
    std::size_t c = 0;
    for (char s : skipped) c += s ? 0 : 1;
    return c;
}

NegativeSampler::NegativeSampler(
    std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets,
    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road, int n_hyperedges,
    SamplerVariant variant, int n_g, int n_h, std::uint64_t seed)
    : neighbor_sets_(std::move(neighbor_sets)),
      edges_of_road_(std::move(edges_of_road)),
      n_roads_(static_cast<int>(neighbor_sets_->size())),
      n_hyperedges_(n_hyperedges),
      variant_(variant),
      n_g_(n_g),
      n_h_(n_h),
      rng_(seed) {}

void NegativeSampler::attach_distances(std::shared_ptr<const DistanceTables> tables,
                                       const Hypergraph& hg) {
    dist_ = std::move(tables);
    hg_ = &hg;
}

bool NegativeSampler::in_neighbors(int anchor, int node) const {
    const auto& nb = (*neighbor_sets_)[static_cast<std::size_t>(anchor)];
    return std::binary_search(nb.begin(), nb.end(), node);
}

bool NegativeSampler::in_hyperedges(int anchor, int hyperedge) const {
    const auto& hs = (*edges_of_road_)[static_cast<std::size_t>(anchor)];
    return std::binary_search(hs.begin(), hs.end(), hyperedge);
}

bool NegativeSampler::sample_nodes(int anchor, std::vector<int>& out) {
    out.clear();
    const auto& nb = (*neighbor_sets_)[static_cast<std::size_t>(anchor)];
    if (static_cast<int>(nb.size()) + 1 >= n_roads_) return false;  // complete graph around anchor

    if (variant_ == SamplerVariant::random) {
        while (static_cast<int>(out.size()) < n_g_) {
            const int cand = static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(n_roads_)));
            if (cand == anchor || in_neighbors(anchor, cand)) continue;
            out.push_back(cand);
        }
        return true;
    }

    if (!dist_) throw ConfigError("dbs sampler used without distance tables");
    // weights proportional to hop distance over the support
    double total = 0.0;
    for (int j = 0; j < n_roads_; ++j) {
        if (j == anchor || in_neighbors(anchor, j)) continue;
        const std::uint16_t d = dist_->at(anchor, j);
        if (d == DistanceTables::kUnreachable) continue;
        total += static_cast<double>(d);
    }
    if (total <= 0.0) return false;
    for (int k = 0; k < n_g_; ++k) {
        double r = rng_.uniform() * total;
        int chosen = -1;
        for (int j = 0; j < n_roads_; ++j) {
            if (j == anchor || in_neighbors(anchor, j)) continue;
            const std::uint16_t d = dist_->at(anchor, j);
            if (d == DistanceTables::kUnreachable) continue;
            r -= static_cast<double>(d);
            if (r < 0.0) {
                chosen = j;
                break;
            }
        }
        if (chosen < 0) {  // numeric edge: fall back to the last support member
            for (int j = n_roads_ - 1; j >= 0; --j) {
                if (j != anchor && !in_neighbors(anchor, j) &&
                    dist_->at(anchor, j) != DistanceTables::kUnreachable) {
                    chosen = j;
                    break;
                }
            }
        }
        out.push_back(chosen);
    }
    return true;
}

bool NegativeSampler::sample_hyperedges(int anchor, std::vector<int>& out) {
    out.clear();
    const auto& hs = (*edges_of_road_)[static_cast<std::size_t>(anchor)];
    if (static_cast<int>(hs.size()) >= n_hyperedges_) return false;  // member of every hyperedge

    if (variant_ == SamplerVariant::random) {
        while (static_cast<int>(out.size()) < n_h_) {
            const int cand = static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(n_hyperedges_)));
            if (in_hyperedges(anchor, cand)) continue;
            out.push_back(cand);
        }
        return true;
    }

    if (!dist_ || !hg_) throw ConfigError("dbs sampler used without distance tables");
    double total = 0.0;
    for (int e = 0; e < n_hyperedges_; ++e) {
        if (in_hyperedges(anchor, e)) continue;
        const double d = dist_->to_road_set(anchor, hg_->hyperedge_to_roads[static_cast<std::size_t>(e)]);
        if (d < 0.0) continue;
        total += d;
    }
    if (total <= 0.0) return false;
    for (int k = 0; k < n_h_; ++k) {
        double r = rng_.uniform() * total;
        int chosen = -1;
        for (int e = 0; e < n_hyperedges_; ++e) {
            if (in_hyperedges(anchor, e)) continue;
            const double d =
                dist_->to_road_set(anchor, hg_->hyperedge_to_roads[static_cast<std::size_t>(e)]);
            if (d < 0.0) continue;
            r -= d;
            if (r < 0.0) {
                chosen = e;
                break;
            }
        }
        if (chosen < 0) {
            for (int e = n_hyperedges_ - 1; e >= 0; --e) {
                if (!in_hyperedges(anchor, e) &&
                    dist_->to_road_set(anchor, hg_->hyperedge_to_roads[static_cast<std::size_t>(e)]) >= 0.0) {
                    chosen = e;
                    break;
                }
            }
        }
        out.push_back(chosen);
    }
    return true;
}

GraphBatch NegativeSampler::draw_graph_batch(const std::vector<std::pair<int, int>>& positives) {
    GraphBatch b;
    b.positives = positives;
    b.negatives.resize(positives.size());
    b.skipped.assign(positives.size(), 0);
    std::size_t skipped = 0;
    for (std::size_t p = 0; p < positives.size(); ++p) {
        if (!sample_nodes(positives[p].first, b.negatives[p])) {
            b.skipped[p] = 1;
            ++skipped;
        }
    }
    if (skipped > 0) {
        std::cerr << "warning: skipped " << skipped
                  << " positive road pair(s) with an empty negative support\n";
    }
    return b;
}

HyperBatch NegativeSampler::draw_hyper_batch(const std::vector<std::pair<int, int>>& positives) {
    HyperBatch b;
    b.positives = positives;
    b.negatives.resize(positives.size());
    b.skipped.assign(positives.size(), 0);
    std::size_t skipped = 0;
    for (std::size_t p = 0; p < positives.size(); ++p) {
        if (!sample_hyperedges(positives[p].first, b.negatives[p])) {
            b.skipped[p] = 1;
            ++skipped;
        }
    }
    if (skipped > 0) {
        std::cerr << "warning: skipped " << skipped
                  << " positive incidence pair(s) with an empty negative support\n";
    }
    return b;
}

}  // namespace hyperroad
