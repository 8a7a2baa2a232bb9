#include "hyperroad/geometry.hpp"

#include <cmath>

#include "hyperroad/errors.hpp"
#include "hyperroad/roadnet.hpp"

namespace hyperroad {

Projection Projection::about_centroid(const RoadNetwork& net) {
    Projection p;
    if (net.size() == 0) return p;
    double sum = 0.0;
    for (const auto& r : net.roads) sum += r.lat;
    p.lat0_rad = (sum / static_cast<double>(net.size())) * M_PI / 180.0;
    p.cos_lat0 = std::cos(p.lat0_rad);
    return p;
}

double polygon_area_signed(const std::vector<ProjectedPoint>& cycle) {
    if (cycle.size() < 3) {
        throw ConfigError("polygon_area: need at least 3 vertices, got " +
                          std::to_string(cycle.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& a = cycle[i];
        const auto& b = cycle[(i + 1) % cycle.size()];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

double polygon_area(const std::vector<ProjectedPoint>& cycle) {
    return std::fabs(polygon_area_signed(cycle));
}

double bearing(const ProjectedPoint& a, const ProjectedPoint& b) {
    return std::atan2(b.y - a.y, b.x - a.x);
}

}  // namespace hyperroad
