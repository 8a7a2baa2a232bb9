#include "hyperroad/roadnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "hyperroad/csv.hpp"
#include "hyperroad/errors.hpp"

#include "json.hpp"

namespace hyperroad {

void AttributeSchema::validate() const {
    if (names.size() != cardinalities.size()) {
        throw ConfigError("schema: names and cardinalities differ in length");
    }
    for (std::size_t j = 0; j < cardinalities.size(); ++j) {
        if (cardinalities[j] < 2) {
            throw ConfigError("schema: attribute '" + names[j] + "' has cardinality " +
                              std::to_string(cardinalities[j]) + ", need >= 2");
        }
    }
}

const std::vector<int>& RoadNetwork::out_neighbors(int i) const {
    if (i < 0 || static_cast<std::size_t>(i) >= roads.size()) {
        throw ConfigError("road index " + std::to_string(i) + " out of range [0, " +
                          std::to_string(roads.size()) + ")");
    }
    return out_neighbors_[static_cast<std::size_t>(i)];
}

bool RoadNetwork::has_edge(int i, int j) const {
    const auto& nb = out_neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

void RoadNetwork::add_edge(int i, int j) {
    if (out_neighbors_.size() != roads.size()) out_neighbors_.resize(roads.size());
    if (i == j) throw FileError("self-loop on road index " + std::to_string(i));
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= roads.size() ||
        static_cast<std::size_t>(j) >= roads.size()) {
        throw FileError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") references road index out of range");
    }
    auto& nb = out_neighbors_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it != nb.end() && *it == j) {
        throw FileError("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    nb.insert(it, j);
    ++edge_count_;
}

void RoadNetwork::validate() const {
    const int n = static_cast<int>(roads.size());
    if (out_neighbors_.size() != roads.size()) {
        throw ConfigError("network: neighbor table size mismatch, call ensure_neighbor_table()");
    }
    std::size_t total = 0;
    for (int i = 0; i < n; ++i) {
        const auto& nb = out_neighbors_[static_cast<std::size_t>(i)];
        total += nb.size();
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (nb[k] < 0 || nb[k] >= n) throw ConfigError("network: neighbor index out of range");
            if (nb[k] == i) throw ConfigError("network: self-loop at road " + std::to_string(i));
            if (k > 0 && nb[k] <= nb[k - 1]) {
                throw ConfigError("network: neighbor list of road " + std::to_string(i) +
                                  " not sorted/duplicate-free");
            }
        }
        if (!std::isfinite(roads[static_cast<std::size_t>(i)].lon) ||
            !std::isfinite(roads[static_cast<std::size_t>(i)].lat)) {
            throw ConfigError("network: non-finite position at road " + std::to_string(i));
        }
    }
    if (total != edge_count_) throw ConfigError("network: edge count mismatch");
    if (schema) {
        schema->validate();
        for (const auto& r : roads) {
            if (r.attributes.size() != schema->size()) {
                throw ConfigError("network: road '" + r.id + "' carries " +
                                  std::to_string(r.attributes.size()) + " attribute slots, schema declares " +
                                  std::to_string(schema->size()));
            }
        }
    }
}

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw FileError(ctx + ": cannot parse number '" + s + "'");
    }
}

}  // namespace

RoadNetwork load_network(std::istream& nodes, std::istream& edges,
                         const std::optional<AttributeSchema>& schema,
                         const std::string& nodes_name, const std::string& edges_name) {
    if (schema) schema->validate();

    RoadNetwork net;
    net.schema = schema;

    CsvReader nr(nodes, nodes_name);
    const auto& head = nr.header();
    if (head.size() < 3 || head[0] != "id" || head[1] != "lon" || head[2] != "lat") {
        throw FileError(nodes_name + ": expected header id,lon,lat[,attr...]");
    }
    const std::size_t m = schema ? schema->size() : head.size() - 3;
    if (head.size() != 3 + m) {
        throw FileError(nodes_name + ": header declares " + std::to_string(head.size() - 3) +
                        " attribute columns, schema declares " + std::to_string(m));
    }

    std::unordered_map<std::string, int> index_of;
    CsvRow row;
    while (nr.next(row)) {
        const std::string ctx = nodes_name + ": line " + std::to_string(row.line_no);
        RoadRecord rec;
        rec.id = row.fields[0];
        if (index_of.count(rec.id)) throw FileError(ctx + ": duplicate node id '" + rec.id + "'");
        rec.lon = parse_double(row.fields[1], ctx);
        rec.lat = parse_double(row.fields[2], ctx);
        if (!std::isfinite(rec.lon) || !std::isfinite(rec.lat)) {
            throw FileError(ctx + ": non-finite coordinate for node '" + rec.id + "'");
        }
        rec.attributes.resize(m, kMissingAttr);
        for (std::size_t j = 0; j < m; ++j) {
            const std::string& f = row.fields[3 + j];
            if (f.empty()) continue;  // missing
            int v = 0;
            auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || p != f.data() + f.size()) {
                throw FileError(ctx + ": cannot parse attribute '" + f + "'");
            }
            if (schema && (v < 0 || v >= schema->cardinalities[j])) {
                throw FileError(ctx + ": attribute '" + schema->names[j] + "' value " +
                                std::to_string(v) + " outside [0, " +
                                std::to_string(schema->cardinalities[j]) + ")");
            }
            if (v < 0) throw FileError(ctx + ": negative attribute value");
            rec.attributes[j] = v;
        }
        index_of.emplace(rec.id, static_cast<int>(net.roads.size()));
        net.roads.push_back(std::move(rec));
    }
    net.ensure_neighbor_table();

    CsvReader er(edges, edges_name);
    if (er.header().size() != 2 || er.header()[0] != "src" || er.header()[1] != "dst") {
        throw FileError(edges_name + ": expected header src,dst");
    }
    while (er.next(row)) {
        const std::string ctx = edges_name + ": line " + std::to_string(row.line_no);
        auto si = index_of.find(row.fields[0]);
        auto di = index_of.find(row.fields[1]);
        if (si == index_of.end()) throw FileError(ctx + ": unknown node id '" + row.fields[0] + "'");
        if (di == index_of.end()) throw FileError(ctx + ": unknown node id '" + row.fields[1] + "'");
        if (si->second == di->second) {
            throw FileError("self-loop at line " + std::to_string(row.line_no) + " of " + edges_name);
        }
        try {
            net.add_edge(si->second, di->second);
        } catch (const FileError& e) {
            throw FileError(ctx + ": " + e.what());
        }
    }

    net.validate();
    return net;
}

void save_network(const RoadNetwork& net, std::ostream& nodes, std::ostream& edges) {
    nodes << "id,lon,lat";
    if (net.schema) {
        for (const auto& n : net.schema->names) nodes << ',' << n;
    }
    nodes << '\n';
    char buf[64];
    auto put = [&buf](std::ostream& os, double v) {
        int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
        os.write(buf, len);
    };
    for (const auto& r : net.roads) {
        nodes << r.id << ',';
        put(nodes, r.lon);
        nodes << ',';
        put(nodes, r.lat);
        for (int a : r.attributes) {
            nodes << ',';
            if (a != kMissingAttr) nodes << a;
        }
        nodes << '\n';
    }
    edges << "src,dst\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (int j : net.neighbors()[i]) {
            edges << net.roads[i].id << ',' << net.roads[static_cast<std::size_t>(j)].id << '\n';
        }
    }
}

RoadNetwork symmetrize_neighbors(const RoadNetwork& net) {
    RoadNetwork out;
    out.roads = net.roads;
    out.schema = net.schema;
    out.ensure_neighbor_table();
    const int n = static_cast<int>(net.size());
    for (int i = 0; i < n; ++i) {
        for (int j : net.neighbors()[static_cast<std::size_t>(i)]) {
            if (!out.has_edge(i, j)) out.add_edge(i, j);
            if (!out.has_edge(j, i)) out.add_edge(j, i);
        }
    }
    out.validate();
    return out;
}

const std::vector<int>& adjacency_row(const RoadNetwork& net, int i) { return net.out_neighbors(i); }

std::vector<std::pair<int, int>> directed_edge_list(const RoadNetwork& net) {
    std::vector<std::pair<int, int>> out;
    out.reserve(net.edge_count());
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (int j : net.neighbors()[i]) out.emplace_back(static_cast<int>(i), j);
    }
    return out;
}

AttributeSchema load_schema(std::istream& in, const std::string& name) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FileError(name + ": " + e.what());
    }
    AttributeSchema s;
    if (!j.contains("attributes") || !j["attributes"].is_array()) {
        throw FileError(name + ": expected {\"attributes\": [{\"name\", \"cardinality\"}...]}");
    }
    for (const auto& a : j["attributes"]) {
        s.names.push_back(a.at("name").get<std::string>());
        s.cardinalities.push_back(a.at("cardinality").get<int>());
    }
    s.validate();
    return s;
}

void save_schema(const AttributeSchema& schema, std::ostream& out) {
    nlohmann::json j;
    j["attributes"] = nlohmann::json::array();
    for (std::size_t i = 0; i < schema.size(); ++i) {
        j["attributes"].push_back(
            {{"name", schema.names[i]}, {"cardinality", schema.cardinalities[i]}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace hyperroad
