#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgtc/geometry.hpp"
#include "cgtc/ship_dynamics.hpp"

namespace cgtc {

/// Disc obstacle; `radius_m` already includes any safety margin. Moving
/// obstacles keep course and speed; for them the radius is their domain.
struct Obstacle {
    Vec2 center;
    double radius_m = 0.0;
    double speed_mps = 0.0;
    CompassAngle course;

    bool moving() const { return speed_mps > 0.0; }
    Vec2 position_at(double t_s) const { return moving() ? center + course.unit() * (speed_mps * t_s) : center; }
};

enum class PlanMode { Free, Static, Dynamic };

struct Pose {
    Vec2 position;
    CompassAngle heading;
};

struct SimConfig {
    double dt_s = 0.5;
    int max_steps = 200;
    double cell_resolution_deg = 5.0;
    double adjust_duration_s = 25.0;
};

struct Scenario {
    std::string name;
    PlanMode mode = PlanMode::Static;
    ShipParams ship;
    Pose start;
    Vec2 destination;
    /// Defaults to the circle radius.
    std::optional<double> reach_tolerance_m;
    std::vector<Obstacle> obstacles;
    /// An explicit radius wins over the domain factor.
    std::optional<double> circle_radius_m;
    std::optional<double> domain_factor;
    SimConfig sim;

    double radius() const;
    double reach_tolerance() const { return reach_tolerance_m.value_or(radius()); }

    /// Throws ValidationError on inconsistent input.
    void validate() const;
};

std::string to_string(PlanMode mode);

/// Parses the JSON scenario format. Unknown keys are rejected. Throws
/// ParseError with line/field context, or ValidationError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Serializes a scenario back to the file format.
std::string dump_scenario(const Scenario& scenario);

}  // namespace cgtc
