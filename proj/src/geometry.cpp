#include "cgtc/geometry.hpp"

#include "cgtc/error.hpp"

namespace cgtc {

double normalize_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    // fmod of a tiny negative value can round up to exactly 360.
    if (r >= 360.0) r -= 360.0;
    return r;
}

double wrap_signed_deg(double deg) {
    double r = normalize_deg(deg);
    if (r > 180.0) r -= 360.0;
    return r;
}

Vec2 polar_to_world(Vec2 center, double radius_m, CompassAngle alpha) {
    return {center.x + radius_m * std::sin(alpha.radians()), center.y + radius_m * std::cos(alpha.radians())};
}

CompassAngle compass_bearing(Vec2 from, Vec2 to) {
    const Vec2 d = to - from;
    if (d.x == 0.0 && d.y == 0.0) {
        throw Error(ErrorCode::CoincidentPoints, "bearing between identical points is undefined");
    }
    return CompassAngle(rad2deg(std::atan2(d.x, d.y)));
}

Vec2 rotate_by_heading(Vec2 offset, CompassAngle heading) {
    const double s = std::sin(heading.radians());
    const double c = std::cos(heading.radians());
    // Ship frame: +y ahead, +x to starboard. Heading rotates clockwise.
    return {offset.x * c + offset.y * s, -offset.x * s + offset.y * c};
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return distance(p, a + ab * t);
}

double point_line_distance(Vec2 p, Vec2 origin, CompassAngle bearing) {
    return std::abs(bearing.unit().cross(p - origin));
}

}  // namespace cgtc
