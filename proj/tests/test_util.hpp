#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hyperroad/roadnet.hpp"

namespace hyperroad::testutil {

inline RoadNetwork make_net(const std::vector<std::pair<double, double>>& positions,
                            const std::vector<std::pair<int, int>>& edges,
                            bool symmetric = true) {
    RoadNetwork net;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        RoadRecord r;
        r.id = "r" + std::to_string(i);
        r.lon = positions[i].first;
        r.lat = positions[i].second;
        net.roads.push_back(std::move(r));
    }
    net.ensure_neighbor_table();
    for (auto [a, b] : edges) {
        net.add_edge(a, b);
        if (symmetric) net.add_edge(b, a);
    }
    return net;
}

// rows x cols planar grid graph: nodes at integer coordinates, lattice edges
inline RoadNetwork grid_graph(int rows, int cols) {
    std::vector<std::pair<double, double>> pos;
    std::vector<std::pair<int, int>> edges;
    for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) pos.emplace_back(x, y);
    }
    for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
            const int v = y * cols + x;
            if (x + 1 < cols) edges.emplace_back(v, v + 1);
            if (y + 1 < rows) edges.emplace_back(v, v + cols);
        }
    }
    return make_net(pos, edges);
}

// cycle graph of n nodes on a circle
inline RoadNetwork cycle_graph(int n) {
    std::vector<std::pair<double, double>> pos;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * 3.14159265358979323846 * i / n;
        pos.emplace_back(std::cos(a), std::sin(a));
        edges.emplace_back(i, (i + 1) % n);
    }
    return make_net(pos, edges);
}

// fresh scratch directory under the system temp root
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        base_ = std::filesystem::temp_directory_path() /
                ("hyperroad_test_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(base_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(base_, ec);
    }
    std::string path(const std::string& name) const { return (base_ / name).string(); }
    std::string dir() const { return base_.string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path base_;
};

}  // namespace hyperroad::testutil
