#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hyperroad {

// Road-as-node convention: each road segment is a vertex of the graph,
// edges mean "these two roads meet at an intersection".

struct AttributeSchema {
    std::vector<std::string> names;
    std::vector<int> cardinalities;  // each >= 2

    std::size_t size() const { return names.size(); }
    void validate() const;
};

// missing categorical value marker
inline constexpr int kMissingAttr = -1;

struct RoadRecord {
    std::string id;
    double lon = 0.0;
    double lat = 0.0;
    std::vector<int> attributes;  // length = schema size, kMissingAttr allowed
};

class RoadNetwork {
public:
    std::vector<RoadRecord> roads;
    std::optional<AttributeSchema> schema;

    std::size_t size() const { return roads.size(); }
    std::size_t edge_count() const { return edge_count_; }

    // size the neighbor table to the current road count (call after filling roads)
    void ensure_neighbor_table() { out_neighbors_.resize(roads.size()); }

    const std::vector<std::vector<int>>& neighbors() const { return out_neighbors_; }
    const std::vector<int>& out_neighbors(int i) const;

    bool has_edge(int i, int j) const;

    // inserts (i, j); rejects self-loops and duplicates
    void add_edge(int i, int j);

    // validates index ranges, sortedness, duplicate-freedom, attribute slots
    void validate() const;

private:
    std::vector<std::vector<int>> out_neighbors_;
    std::size_t edge_count_ = 0;
};

// Streams carry CSV: nodes `id,lon,lat[,attr...]`, edges `src,dst`.
// Row order of the nodes stream defines road indices.
RoadNetwork load_network(std::istream& nodes, std::istream& edges,
                         const std::optional<AttributeSchema>& schema = std::nullopt,
                         const std::string& nodes_name = "nodes",
                         const std::string& edges_name = "edges");

void save_network(const RoadNetwork& net, std::ostream& nodes, std::ostream& edges);

// j in out_neighbors[i] <=> i in out_neighbors[j]; idempotent, never removes edges
RoadNetwork symmetrize_neighbors(const RoadNetwork& net);

// neighbor list of road i (throws on out-of-range index)
const std::vector<int>& adjacency_row(const RoadNetwork& net, int i);

// all directed (i, j) pairs with j in out_neighbors[i], in index order
std::vector<std::pair<int, int>> directed_edge_list(const RoadNetwork& net);

AttributeSchema load_schema(std::istream& in, const std::string& name = "schema");
void save_schema(const AttributeSchema& schema, std::ostream& out);

}  // namespace hyperroad
