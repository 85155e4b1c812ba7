#pragma once

#include <cmath>
#include <numbers>

namespace cgtc {

constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Planar vector in the world frame: x east, y north, meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Wraps any angle in degrees into [0, 360).
double normalize_deg(double deg);

/// Wraps any angle in degrees into (-180, 180].
double wrap_signed_deg(double deg);

/// Compass direction: degrees clockwise from north (+y), always in [0, 360).
class CompassAngle {
public:
    constexpr CompassAngle() = default;
    explicit CompassAngle(double degrees) : deg_(normalize_deg(degrees)) {}

    double degrees() const { return deg_; }
    double radians() const { return deg2rad(deg_); }

    /// Unit vector pointing along this bearing.
    Vec2 unit() const { return {std::sin(radians()), std::cos(radians())}; }

    CompassAngle operator+(double delta_deg) const { return CompassAngle(deg_ + delta_deg); }
    CompassAngle operator-(double delta_deg) const { return CompassAngle(deg_ - delta_deg); }

    /// Signed clockwise turn from `from` to this angle, in (-180, 180].
    double signed_from(CompassAngle from) const { return wrap_signed_deg(deg_ - from.deg_); }

    bool operator==(const CompassAngle&) const = default;

private:
    double deg_ = 0.0;
};

/// Signed clockwise difference `to - from` in (-180, 180].
inline double signed_difference(CompassAngle to, CompassAngle from) { return to.signed_from(from); }

/// Point at distance `radius_m` from `center` along compass bearing `alpha`.
Vec2 polar_to_world(Vec2 center, double radius_m, CompassAngle alpha);

/// Four-quadrant compass bearing from `from` to `to`. Throws CoincidentPoints.
CompassAngle compass_bearing(Vec2 from, Vec2 to);

/// Rotates a ship-frame offset (x starboard, y ahead) into the world frame for a
/// vessel heading `heading`.
Vec2 rotate_by_heading(Vec2 offset, CompassAngle heading);

/// Shortest distance from point `p` to segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Perpendicular distance from `p` to the infinite line through `origin` along `bearing`.
double point_line_distance(Vec2 p, Vec2 origin, CompassAngle bearing);

}  // namespace cgtc
