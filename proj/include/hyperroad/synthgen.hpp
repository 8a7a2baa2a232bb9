#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperroad/roadnet.hpp"

namespace hyperroad {

// Planted per-district categorical distribution for one attribute.
struct DistrictDistribution {
    int modal_value = 0;
    double modal_prob = 0.85;  // remainder spread uniformly over other values
};

struct GridCitySpec {
    int rows = 10;        // intersection rows
    int cols = 10;        // intersection columns
    double spacing = 1e-4;  // degrees between intersections
    double origin_lon = 0.0;
    double origin_lat = 0.0;
    int districts = 4;
    double perturbation = 0.0;  // coordinate jitter in degrees, < 0.4 * spacing
    std::uint64_t seed = 1;
    // attribute value counts; district d gets modal value d % cardinality
    std::vector<std::string> attr_names{"road_type", "speed", "lanes", "oneway"};
    std::vector<int> attr_cardinalities{4, 6, 6, 2};
    double modal_prob = 0.85;
    // optional per-attribute override: modal_values[a][d] replaces the
    // default district-to-modal mapping (e.g. checkerboard label patterns)
    std::vector<std::vector<int>> modal_values;

    void validate() const;
};

struct GridCity {
    RoadNetwork net;                       // symmetric, roads at segment midpoints
    std::vector<std::vector<int>> labels;  // [attribute][road]
    std::vector<int> district_of_road;
    GridCitySpec spec;
};

// Deterministic lattice city: every lattice segment becomes a road node at
// its midpoint, roads are adjacent iff their segments share an intersection,
// districts are contiguous rectangles of cells with district-correlated
// labels drawn from the planted distributions.
GridCity generate(const GridCitySpec& spec);

void write_city(const GridCity& city, std::ostream& nodes, std::ostream& edges,
                std::ostream& labels_csv, std::ostream& schema_json);

GridCitySpec load_city_spec(std::istream& in, const std::string& name = "city-spec");
void save_city_spec(const GridCitySpec& spec, std::ostream& out);

}  // namespace hyperroad
