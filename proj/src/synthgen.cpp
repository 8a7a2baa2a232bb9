#include "hyperroad/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hyperroad/errors.hpp"
#include "hyperroad/rng.hpp"

#include "json.hpp"

namespace hyperroad {

void GridCitySpec::validate() const {
    if (rows < 3 || cols < 3) throw ConfigError("grid city needs rows, cols >= 3");
    if (districts < 1) throw ConfigError("grid city needs >= 1 district");
    if (!(spacing > 0.0)) throw ConfigError("grid city spacing must be > 0");
    if (perturbation < 0.0 || perturbation >= 0.4 * spacing) {
        throw ConfigError("perturbation must lie in [0, 0.4 * spacing)");
    }
    if (attr_names.size() != attr_cardinalities.size()) {
        throw ConfigError("attribute names/cardinalities mismatch");
    }
    for (int c : attr_cardinalities) {
        if (c < 2) throw ConfigError("attribute cardinality must be >= 2");
    }
    if (!(modal_prob > 0.0) || modal_prob > 1.0) {
        throw ConfigError("modal_prob must be in (0, 1]");
    }
    if (!modal_values.empty()) {
        if (modal_values.size() != attr_names.size()) {
            throw ConfigError("modal_values must cover every attribute");
        }
        for (std::size_t a = 0; a < modal_values.size(); ++a) {
            if (static_cast<int>(modal_values[a].size()) != districts) {
                throw ConfigError("modal_values[" + std::to_string(a) +
                                  "] must list one value per district");
            }
            for (int v : modal_values[a]) {
                if (v < 0 || v >= attr_cardinalities[a]) {
                    throw ConfigError("modal value out of range for attribute " +
                                      attr_names[a]);
                }
            }
        }
    }
}

namespace {

// near-square district grid: districts = dr * dc rectangles of cells
std::pair<int, int> district_grid(int districts) {
    int dr = static_cast<int>(std::sqrt(static_cast<double>(districts)));
    while (dr > 1 && districts % dr != 0) --dr;
    return {dr, districts / dr};
}

}  // namespace

GridCity generate(const GridCitySpec& spec) {
    spec.validate();
    GridCity city;
    city.spec = spec;
    Rng rng(spec.seed);

    const int rows = spec.rows, cols = spec.cols;
    const double h = spec.spacing;

    // segment midpoints; horizontal segments first, then vertical, row-major
    struct Segment {
        double mx, my;  // midpoint in cell units
    };
    std::vector<Segment> segments;
    std::vector<std::vector<int>> roads_at(static_cast<std::size_t>(rows * cols));
    auto intersection = [cols](int x, int y) { return y * cols + x; };

    for (int y = 0; y < rows; ++y) {
        for (int x = 0; x + 1 < cols; ++x) {
            const int id = static_cast<int>(segments.size());
            segments.push_back({x + 0.5, static_cast<double>(y)});
            roads_at[static_cast<std::size_t>(intersection(x, y))].push_back(id);
            roads_at[static_cast<std::size_t>(intersection(x + 1, y))].push_back(id);
        }
    }
    for (int y = 0; y + 1 < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
            const int id = static_cast<int>(segments.size());
            segments.push_back({static_cast<double>(x), y + 0.5});
            roads_at[static_cast<std::size_t>(intersection(x, y))].push_back(id);
            roads_at[static_cast<std::size_t>(intersection(x, y + 1))].push_back(id);
        }
    }

    // roads with jittered midpoints
    for (std::size_t i = 0; i < segments.size(); ++i) {
        RoadRecord r;
        r.id = "r" + std::to_string(i);
        const double jx = spec.perturbation > 0.0 ? rng.uniform(-spec.perturbation, spec.perturbation) : 0.0;
        const double jy = spec.perturbation > 0.0 ? rng.uniform(-spec.perturbation, spec.perturbation) : 0.0;
        r.lon = spec.origin_lon + segments[i].mx * h + jx;
        r.lat = spec.origin_lat + segments[i].my * h + jy;
        city.net.roads.push_back(std::move(r));
    }
    city.net.ensure_neighbor_table();

    AttributeSchema schema;
    schema.names = spec.attr_names;
    schema.cardinalities = spec.attr_cardinalities;
    city.net.schema = schema;

    // two roads are adjacent iff their segments share an intersection
    for (const auto& group : roads_at) {
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = a + 1; b < group.size(); ++b) {
                if (!city.net.has_edge(group[a], group[b])) {
                    city.net.add_edge(group[a], group[b]);
                    city.net.add_edge(group[b], group[a]);
                }
            }
        }
    }

    // district of a road: the cell rectangle containing its unjittered midpoint
    const auto [dr, dc] = district_grid(spec.districts);
    const int cell_rows = rows - 1, cell_cols = cols - 1;
    city.district_of_road.resize(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        int cx = std::min(static_cast<int>(segments[i].mx), cell_cols - 1);
        int cy = std::min(static_cast<int>(segments[i].my), cell_rows - 1);
        const int dx = std::min(cx * dc / cell_cols, dc - 1);
        const int dy = std::min(cy * dr / cell_rows, dr - 1);
        city.district_of_road[i] = dy * dc + dx;
    }

    // district-correlated labels, drawn road-major then attribute-major
    city.labels.assign(spec.attr_names.size(), std::vector<int>(segments.size(), 0));
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const int district = city.district_of_road[i];
        for (std::size_t a = 0; a < spec.attr_names.size(); ++a) {
            const int card = spec.attr_cardinalities[a];
            const int modal = spec.modal_values.empty()
                                  ? district % card
                                  : spec.modal_values[a][static_cast<std::size_t>(district)];
            int value;
            if (rng.uniform() < spec.modal_prob) {
                value = modal;
            } else {
                // uniform over the non-modal values
                const int other = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(card - 1)));
                value = other >= modal ? other + 1 : other;
            }
            city.labels[a][i] = value;
            city.net.roads[i].attributes.push_back(value);
        }
    }
    city.net.validate();
    return city;
}

void write_city(const GridCity& city, std::ostream& nodes, std::ostream& edges,
                std::ostream& labels_csv, std::ostream& schema_json) {
    save_network(city.net, nodes, edges);
    save_schema(*city.net.schema, schema_json);

    labels_csv << "id";
    for (const auto& n : city.spec.attr_names) labels_csv << ',' << n;
    labels_csv << '\n';
    for (std::size_t i = 0; i < city.net.size(); ++i) {
        labels_csv << city.net.roads[i].id;
        for (std::size_t a = 0; a < city.labels.size(); ++a) labels_csv << ',' << city.labels[a][i];
        labels_csv << '\n';
    }
}

GridCitySpec load_city_spec(std::istream& in, const std::string& name) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FileError(name + ": " + e.what());
    }
    GridCitySpec s;
    try {
        if (j.contains("rows")) s.rows = j["rows"].get<int>();
        if (j.contains("cols")) s.cols = j["cols"].get<int>();
        if (j.contains("spacing")) s.spacing = j["spacing"].get<double>();
        if (j.contains("origin_lon")) s.origin_lon = j["origin_lon"].get<double>();
        if (j.contains("origin_lat")) s.origin_lat = j["origin_lat"].get<double>();
        if (j.contains("districts")) s.districts = j["districts"].get<int>();
        if (j.contains("perturbation")) s.perturbation = j["perturbation"].get<double>();
        if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("modal_prob")) s.modal_prob = j["modal_prob"].get<double>();
        if (j.contains("attributes")) {
            s.attr_names.clear();
            s.attr_cardinalities.clear();
            for (const auto& a : j["attributes"]) {
                s.attr_names.push_back(a.at("name").get<std::string>());
                s.attr_cardinalities.push_back(a.at("cardinality").get<int>());
            }
        }
        if (j.contains("modal_values")) {
            s.modal_values = j["modal_values"].get<std::vector<std::vector<int>>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw FileError(name + ": " + e.what());
    }
    s.validate();
    return s;
}

void save_city_spec(const GridCitySpec& spec, std::ostream& out) {
    nlohmann::json j;
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
    j["spacing"] = spec.spacing;
    j["origin_lon"] = spec.origin_lon;
    j["origin_lat"] = spec.origin_lat;
    j["districts"] = spec.districts;
    j["perturbation"] = spec.perturbation;
    j["seed"] = spec.seed;
    j["modal_prob"] = spec.modal_prob;
    j["attributes"] = nlohmann::json::array();
    for (std::size_t a = 0; a < spec.attr_names.size(); ++a) {
        j["attributes"].push_back(
            {{"name", spec.attr_names[a]}, {"cardinality", spec.attr_cardinalities[a]}});
    }
    if (!spec.modal_values.empty()) j["modal_values"] = spec.modal_values;
    out << j.dump(2) << '\n';
}

}  // namespace hyperroad
