#pragma once

#include <vector>

namespace hyperroad {

class RoadNetwork;

struct ProjectedPoint {
    double x = 0.0;  // east, scaled degrees of longitude
    double y = 0.0;  // north, scaled degrees of latitude
};

// Equirectangular projection about a fixed origin latitude:
//   x = lon * cos(lat0) * scale,  y = lat * scale.
// Adequate for relative areas and bearings at city scale.
struct Projection {
    double lat0_rad = 0.0;
    double cos_lat0 = 1.0;
    static constexpr double kScale = 111320.0;  // ~meters per degree at the equator

    static Projection about_centroid(const RoadNetwork& net);

    ProjectedPoint operator()(double lon, double lat) const {
        return {lon * cos_lat0 * kScale, lat * kScale};
    }
};

// Absolute shoelace area of the polygon through the vertex list (closed implicitly).
// Throws ConfigError on fewer than 3 vertices.
double polygon_area(const std::vector<ProjectedPoint>& cycle);

// Signed shoelace area (positive = counterclockwise).
double polygon_area_signed(const std::vector<ProjectedPoint>& cycle);

// Angle of the vector from a to b, in (-pi, pi], measured CCW from +x.
double bearing(const ProjectedPoint& a, const ProjectedPoint& b);

}  // namespace hyperroad
