#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cgtc/circle_grid.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace cgtc {

/// Rudder commands below this magnitude are trim, not steering.
inline constexpr double kSteeringThresholdDeg = 1.0;

/// Bearings of the left and right tangents from `current` to the obstacle disc.
/// Throws InsideObstacle when `current` is not strictly outside the disc.
std::pair<CompassAngle, CompassAngle> tangent_angles(Vec2 current, const Obstacle& obstacle);

struct HeadingDecision {
    /// Bearing the vessel ultimately wants to hold.
    CompassAngle target_bearing;
    /// Heading change commanded for this step, limited to +-max heading change.
    double heading_change_deg = 0.0;
    /// True when the target lies beyond the maximum change and this step only
    /// turns as far as possible toward it.
    bool two_step = false;
    /// Obstacle whose tangent produced the target, if any.
    std::optional<std::size_t> focused_obstacle;
};

HeadingDecision select_heading_free(const GridNode& pose, Vec2 destination, const CellSet& cells);

/// Tangency strategy: among obstacles blocking the straight run to the
/// destination, the extreme left and right tangent bearings bound the blocked
/// sector; the one closer to the destination bearing wins, ties to starboard.
HeadingDecision select_heading_static(const GridNode& pose, Vec2 destination, std::span<const Obstacle> obstacles,
                                      const CellSet& cells);

/// True when the destination bearing is outside the obstacle's tangent cone or
/// the obstacle lies more than 90 deg off the current heading.
bool is_bypassed(const GridNode& pose, const Obstacle& obstacle, Vec2 destination);

/// True when the straight segment from `from` to the destination crosses the disc.
bool blocks_destination(Vec2 from, const Obstacle& obstacle, Vec2 destination);

/// Bookkeeping of one planning step.
struct PlanStep {
    std::size_t node_index = 0;
    CompassAngle decided_bearing;
    double commanded_heading_change_deg = 0.0;
    double realized_heading_change_deg = 0.0;
    double delta0_deg = 0.0;
    std::optional<std::size_t> focused_obstacle;
    bool two_step = false;
    /// The decided cell was unsafe and a neighbouring heading change was used.
    bool safety_override = false;
    /// Virtual obstacle in force during this step (dynamic planning).
    std::optional<Obstacle> virtual_obstacle;
};

struct PlanResult {
    std::vector<GridNode> nodes;
    std::vector<ShipState> trajectory;
    std::vector<double> times_s;
    /// One delta0 per step.
    std::vector<double> rudder_commands;
    std::vector<PlanStep> steps;
    double path_length_m = 0.0;
    int steering_count = 0;
    bool reached = false;
    /// Smallest distance from any sample to any static obstacle boundary.
    double min_clearance_m = 0.0;
    /// Distance to the moving obstacle at each trajectory sample (dynamic plans).
    std::vector<double> separation_m;
    std::vector<Vec2> obstacle_track;
    double min_separation_m = 0.0;
    std::string message;
};

/// Arc length of a sampled trajectory.
double path_length(std::span<const ShipState> trajectory);

/// Number of commands with magnitude at or above the steering threshold.
int count_steering(std::span<const double> rudder_commands);

/// Smallest distance from any sample to any obstacle boundary (negative when inside).
double min_clearance(std::span<const ShipState> trajectory, std::span<const Obstacle> obstacles);

/// Continuous-tracking tangency planner over static disc obstacles.
PlanResult plan_static(const Scenario& scenario);
PlanResult plan_static(const Scenario& scenario, const CellSet& cells);

/// Cell set matching the scenario's radius, resolution and timing.
CellSet build_scenario_cells(const Scenario& scenario);

}  // namespace cgtc
