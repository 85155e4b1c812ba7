#include "cgtc/static_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cgtc/error.hpp"
#include "planning_engine.hpp"

namespace cgtc {

std::pair<CompassAngle, CompassAngle> tangent_angles(Vec2 current, const Obstacle& obstacle) {
    const double d = distance(current, obstacle.center);
    if (!(d > obstacle.radius_m)) {
        throw Error(ErrorCode::InsideObstacle, "point is " + std::to_string(d) + " m from an obstacle of radius " +
                                                   std::to_string(obstacle.radius_m) + " m");
    }
    const CompassAngle to_center = compass_bearing(current, obstacle.center);
    const double half_width = rad2deg(std::asin(obstacle.radius_m / d));
    return {to_center - half_width, to_center + half_width};
}

bool blocks_destination(Vec2 from, const Obstacle& obstacle, Vec2 destination) {
    return point_segment_distance(obstacle.center, from, destination) < obstacle.radius_m;
}

bool is_bypassed(const GridNode& pose, const Obstacle& obstacle, Vec2 destination) {
    if (distance(pose.position, obstacle.center) <= obstacle.radius_m) return false;
    const auto [left, right] = tangent_angles(pose.position, obstacle);
    const CompassAngle to_dest = compass_bearing(pose.position, destination);
    const double half = right.signed_from(left) / 2.0;
    const CompassAngle to_center = compass_bearing(pose.position, obstacle.center);
    const bool in_cone = std::abs(to_dest.signed_from(to_center)) < half;
    const bool astern = std::abs(to_center.signed_from(pose.heading)) > 90.0;
    return !in_cone || astern;
}

HeadingDecision select_heading_free(const GridNode& pose, Vec2 destination, const CellSet& cells) {
    return detail::decide_bearing(pose, compass_bearing(pose.position, destination), cells);
}

HeadingDecision select_heading_static(const GridNode& pose, Vec2 destination, std::span<const Obstacle> obstacles,
                                      const CellSet& cells) {
    for (const auto& o : obstacles) {
        if (distance(pose.position, o.center) <= o.radius_m) {
            throw Error(ErrorCode::InsideObstacle, "current node lies inside an obstacle");
        }
    }
    const CompassAngle to_dest = compass_bearing(pose.position, destination);

    bool any = false;
    double left_offset = 0.0, right_offset = 0.0;
    std::size_t left_idx = 0, right_idx = 0;
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        if (is_bypassed(pose, o, destination) || !blocks_destination(pose.position, o, destination)) continue;
        const auto [left, right] = tangent_angles(pose.position, o);
        const double lo = left.signed_from(to_dest);
        const double hi = right.signed_from(to_dest);
        if (!any || lo < left_offset) {
            left_offset = lo;
            left_idx = i;
        }
        if (!any || hi > right_offset) {
            right_offset = hi;
            right_idx = i;
        }
        any = true;
    }
    if (!any) return select_heading_free(pose, destination, cells);

    const bool starboard = std::abs(right_offset) <= std::abs(left_offset);
    HeadingDecision d = detail::decide_bearing(pose, to_dest + (starboard ? right_offset : left_offset), cells);
    d.focused_obstacle = starboard ? right_idx : left_idx;
    return d;
}

double path_length(std::span<const ShipState> trajectory) {
    double total = 0.0;
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        total += std::hypot(trajectory[i].x_m - trajectory[i - 1].x_m, trajectory[i].y_m - trajectory[i - 1].y_m);
    }
    return total;
}

int count_steering(std::span<const double> rudder_commands) {
    return static_cast<int>(std::count_if(rudder_commands.begin(), rudder_commands.end(),
                                          [](double d) { return std::abs(d) >= kSteeringThresholdDeg; }));
}

double min_clearance(std::span<const ShipState> trajectory, std::span<const Obstacle> obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : trajectory) {
        for (const auto& o : obstacles) {
            best = std::min(best, distance({s.x_m, s.y_m}, o.center) - o.radius_m);
        }
    }
    return best;
}

CellSet build_scenario_cells(const Scenario& scenario) {
    CellOptions opts;
    opts.dt_s = scenario.sim.dt_s;
    opts.adjust_duration_s = scenario.sim.adjust_duration_s;
    return build_cell_set(scenario.ship, scenario.radius(), scenario.sim.cell_resolution_deg, opts);
}

PlanResult plan_static(const Scenario& scenario) { return plan_static(scenario, build_scenario_cells(scenario)); }

PlanResult plan_static(const Scenario& scenario, const CellSet& cells) {
    scenario.validate();
    std::vector<Obstacle> obstacles;
    for (const auto& o : scenario.obstacles) {
        if (!o.moving()) obstacles.push_back(o);
    }
    for (const auto& o : obstacles) {
        if (distance(scenario.start.position, o.center) <= o.radius_m) {
            throw Error(ErrorCode::StartInsideObstacle, "start pose lies inside an obstacle");
        }
        if (distance(scenario.destination, o.center) <= o.radius_m) {
            throw Error(ErrorCode::DestinationInsideObstacle, "destination lies inside an obstacle");
        }
    }

    detail::PlanEngine engine(scenario, cells);
    const detail::SafetyFn safety = [&](std::span<const ShipState> samples, std::span<const double>) {
        return detail::static_check(samples, obstacles);
    };

    const std::vector<Obstacle> steering = detail::steering_discs(obstacles, cells.radius_m);
    for (int k = 0; k < scenario.sim.max_steps; ++k) {
        if (engine.at_destination()) return engine.finish(obstacles, true, "destination reached");
        const HeadingDecision d = select_heading_static(engine.current(), scenario.destination, steering, cells);
        if (!engine.advance(d, safety)) {
            return engine.finish(obstacles, false, "no admissible cell at step " + std::to_string(k));
        }
    }
    const bool reached = engine.at_destination();
    return engine.finish(obstacles, reached, reached ? "destination reached" : "step budget exhausted");
}

}  // namespace cgtc
