#include "hyperroad/faces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hyperroad/errors.hpp"
#include "hyperroad/roadnet.hpp"

namespace hyperroad {

// Face extraction works on the road-junction incidence embedding rather than
// on the road graph directly. Roads that meet at one intersection form a
// clique in the road graph, so the junctions are recovered as the connected
// components of each road's neighborhood: two neighbors of road i belong to
// the same junction iff they are themselves adjacent. The traversal graph is
// bipartite (road vertices at road positions, junction vertices at member
// centroids); it is planar whenever the underlying road map is, including at
// 4-way intersections where the road graph itself has crossing chords.
// Faces are then the orbits of the classical rotation-system walk: at each
// vertex, incident edges are sorted counterclockwise by bearing, and a walk
// arriving over half-edge (u, v) leaves over the CCW successor of (v, u).
// With this convention bounded faces are traced clockwise (negative signed
// area) and each component's outer face counterclockwise (most positive).
//
// Known limitation: three roads forming a triangle are indistinguishable from
// three roads at a single junction and collapse to one junction (no face).

namespace {

struct TraversalGraph {
    // vertex ids: [0, n_roads) are roads, [n_roads, ...) are junctions
    std::vector<ProjectedPoint> pos;
    std::vector<std::vector<int>> adj;  // rotation-sorted after build
    int n_roads = 0;
};

// connected components of the induced subgraph on nbrs
std::vector<std::vector<int>> neighborhood_groups(const RoadNetwork& net,
                                                  const std::vector<int>& nbrs) {
    std::vector<std::vector<int>> groups;
    std::vector<char> seen(nbrs.size(), 0);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> group;
        std::vector<std::size_t> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            group.push_back(nbrs[cur]);
            for (std::size_t t = 0; t < nbrs.size(); ++t) {
                if (!seen[t] && net.has_edge(nbrs[cur], nbrs[t])) {
                    seen[t] = 1;
                    stack.push_back(t);
                }
            }
        }
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
    }
    return groups;
}

TraversalGraph build_traversal_graph(const RoadNetwork& net, const Projection& proj) {
    const int n = static_cast<int>(net.size());
    TraversalGraph g;
    g.n_roads = n;
    g.pos.resize(static_cast<std::size_t>(n));
    g.adj.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        g.pos[static_cast<std::size_t>(i)] = proj(net.roads[static_cast<std::size_t>(i)].lon,
                                                  net.roads[static_cast<std::size_t>(i)].lat);
    }

    // junction key = sorted set of all roads meeting there ({i} + one group)
    std::map<std::vector<int>, int> junction_of;
    for (int i = 0; i < n; ++i) {
        for (const auto& group : neighborhood_groups(net, net.neighbors()[static_cast<std::size_t>(i)])) {
            std::vector<int> key = group;
            key.insert(std::lower_bound(key.begin(), key.end(), i), i);
            auto [it, inserted] = junction_of.try_emplace(key, static_cast<int>(g.pos.size()));
            if (inserted) {
                ProjectedPoint c{0.0, 0.0};
                for (int r : key) {
                    c.x += g.pos[static_cast<std::size_t>(r)].x;
                    c.y += g.pos[static_cast<std::size_t>(r)].y;
                }
                c.x /= static_cast<double>(key.size());
                c.y /= static_cast<double>(key.size());
                g.pos.push_back(c);
                g.adj.emplace_back();
            }
            g.adj[static_cast<std::size_t>(i)].push_back(it->second);
            g.adj[static_cast<std::size_t>(it->second)].push_back(i);
        }
    }

    // rotation system: sort each adjacency CCW by bearing, reject ties
    for (std::size_t v = 0; v < g.adj.size(); ++v) {
        auto& nb = g.adj[v];
        std::vector<std::pair<double, int>> order;
        order.reserve(nb.size());
        for (int w : nb) {
            order.emplace_back(bearing(g.pos[v], g.pos[static_cast<std::size_t>(w)]), w);
        }
        std::sort(order.begin(), order.end());
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            if (order[k].first == order[k + 1].first) {
                const std::string where =
                    v < static_cast<std::size_t>(g.n_roads)
                        ? "road '" + net.roads[v].id + "'"
                        : "junction of road '" +
                              net.roads[static_cast<std::size_t>(order[k].second)].id + "'";
                throw ConfigError("degenerate geometry: two incident half-edges at identical bearing near " +
                                  where);
            }
        }
        for (std::size_t k = 0; k < order.size(); ++k) nb[k] = order[k].second;
    }
    return g;
}

int component_labels(const TraversalGraph& g, std::vector<int>& comp) {
    comp.assign(g.adj.size(), -1);
    int n_comp = 0;
    for (std::size_t s = 0; s < g.adj.size(); ++s) {
        if (comp[s] != -1 || g.adj[s].empty()) continue;
        comp[s] = n_comp;
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (int w : g.adj[v]) {
                if (comp[static_cast<std::size_t>(w)] == -1) {
                    comp[static_cast<std::size_t>(w)] = n_comp;
                    stack.push_back(static_cast<std::size_t>(w));
                }
            }
        }
        ++n_comp;
    }
    return n_comp;
}

}  // namespace

FaceTrace trace_faces(const RoadNetwork& net, const Projection& proj) {
    FaceTrace trace;
    if (net.size() < 3) return trace;
    TraversalGraph g = build_traversal_graph(net, proj);

    std::vector<int> comp;
    trace.components = component_labels(g, comp);

    // index half-edges as (vertex, slot into rotation)
    std::vector<std::size_t> first_slot(g.adj.size() + 1, 0);
    for (std::size_t v = 0; v < g.adj.size(); ++v) {
        first_slot[v + 1] = first_slot[v] + g.adj[v].size();
    }
    trace.half_edges_total = first_slot.back();
    std::vector<char> used(trace.half_edges_total, 0);

    auto slot_of = [&](int v, int w) {
        const auto& nb = g.adj[static_cast<std::size_t>(v)];
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (nb[k] == w) return k;
        }
        throw NumericError("face traversal: inconsistent adjacency");
    };

    for (std::size_t v0 = 0; v0 < g.adj.size(); ++v0) {
        for (std::size_t k0 = 0; k0 < g.adj[v0].size(); ++k0) {
            if (used[first_slot[v0] + k0]) continue;

            FaceWalk walk;
            walk.component = comp[v0];
            std::vector<ProjectedPoint> polygon;
            int v = static_cast<int>(v0);
            std::size_t k = k0;
            while (true) {
                used[first_slot[static_cast<std::size_t>(v)] + k] = 1;
                ++trace.half_edges_consumed;
                polygon.push_back(g.pos[static_cast<std::size_t>(v)]);
                if (v < g.n_roads) {
                    if (walk.roads.empty() || walk.roads.back() != v) walk.roads.push_back(v);
                }
                int w = g.adj[static_cast<std::size_t>(v)][k];
                // leave w over the CCW successor of the reverse half-edge (w, v)
                std::size_t rev = slot_of(w, v);
                std::size_t next = (rev + 1) % g.adj[static_cast<std::size_t>(w)].size();
                v = w;
                k = next;
                if (static_cast<std::size_t>(v) == v0 && k == k0) break;
            }
            if (walk.roads.size() > 1 && walk.roads.front() == walk.roads.back()) {
                walk.roads.pop_back();
            }
            walk.signed_area = polygon.size() >= 3 ? polygon_area_signed(polygon) : 0.0;
            trace.walks.push_back(std::move(walk));
        }
    }

    // per component, the outer face is the most positive signed area
    std::vector<int> outer_idx(static_cast<std::size_t>(trace.components), -1);
    for (std::size_t f = 0; f < trace.walks.size(); ++f) {
        const auto c = static_cast<std::size_t>(trace.walks[f].component);
        if (outer_idx[c] == -1 ||
            trace.walks[f].signed_area > trace.walks[static_cast<std::size_t>(outer_idx[c])].signed_area) {
            outer_idx[c] = static_cast<int>(f);
        }
    }
    for (int f : outer_idx) {
        if (f >= 0) trace.walks[static_cast<std::size_t>(f)].outer = true;
    }
    return trace;
}

std::vector<std::vector<int>> extract_faces(const RoadNetwork& net) {
    const Projection proj = Projection::about_centroid(net);
    FaceTrace trace = trace_faces(net, proj);
    std::vector<std::vector<int>> faces;
    for (auto& w : trace.walks) {
        if (w.outer) continue;
        // count distinct roads without disturbing walk order
        std::vector<int> sorted = w.roads;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        if (sorted.size() < 3) continue;
        faces.push_back(std::move(w.roads));
    }
    return faces;
}

}  // namespace hyperroad
