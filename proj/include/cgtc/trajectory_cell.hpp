#pragma once

#include <cstddef>
#include <vector>

#include "cgtc/geometry.hpp"
#include "cgtc/relation_fit.hpp"
#include "cgtc/ship_dynamics.hpp"

namespace cgtc {

/// Knobs of the two-stage cell maneuver.
struct CellOptions {
    double dt_s = 0.5;
    /// Length of the posture-adjustment stage: the rudder command stays at
    /// delta0 for this long, then returns to zero for stabilization.
    double adjust_duration_s = 25.0;
    /// Simulation budget for one cell before it is declared unreachable.
    double max_duration_s = 900.0;
    /// Heading-change accuracy demanded from generate_cell.
    double heading_tolerance_deg = 0.2;
    int max_iterations = 100;
    double max_heading_change_deg = 90.0;
};

/// One standardized maneuver in the ship frame: it starts at the origin heading
/// north in the trimmed state and ends where the track first crosses the
/// circle of radius `radius_m`.
struct TrajectoryCell {
    std::vector<ShipState> samples;
    std::vector<double> times_s;
    /// Commanded rudder at each sample.
    std::vector<double> commands_deg;
    double delta0_deg = 0.0;
    double heading_change_deg = 0.0;
    Vec2 end_offset;
    /// Signed bearing of end_offset from the origin, (-180, 180].
    double central_angle_deg = 0.0;
    double arc_length_m = 0.0;
    double duration_s = 0.0;
    double radius_m = 0.0;
};

/// Runs the adjust/stabilize maneuver with commanded rudder `delta0_deg` until
/// the track crosses the circle. Throws Unreachable when the circle is met
/// before the vessel is back to zero rudder and steady speed, or not at all.
TrajectoryCell simulate_cell(const ShipParams& params, double delta0_deg, double radius_m,
                             const CellOptions& options = {});

/// Solves delta0 by bisection so the heading change at the circle crossing
/// equals the target within options.heading_tolerance_deg.
TrajectoryCell generate_cell(const ShipParams& params, double target_heading_change_deg, double radius_m,
                             const CellOptions& options = {});

struct RuleReport {
    bool rule1_stable_ends = false;
    bool rule2_single_steering = false;
    bool rule3_on_circle = false;
    double max_end_rudder_deg = 0.0;
    /// max |u - u0| / u0 over first and last sample.
    double speed_slack = 0.0;
    int steering_plateaus = 0;
    /// |end distance - R| / R.
    double distance_slack = 0.0;

    bool all() const { return rule1_stable_ends && rule2_single_steering && rule3_on_circle; }
};

inline constexpr double kSpeedTolerance = 1e-3;
inline constexpr double kRadiusTolerance = 5e-3;

RuleReport validate_rules(const TrajectoryCell& cell, const ShipParams& params);

/// The cell family of one circle radius, indexed by heading change.
struct CellSet {
    double radius_m = 0.0;
    double resolution_deg = 5.0;
    double max_heading_change_deg = 90.0;
    /// Ordered by increasing heading change.
    std::vector<TrajectoryCell> cells;
    CubicRelation relation;
    CellOptions options;

    /// Index of the cell whose heading change is closest to `heading_change_deg`.
    std::size_t nearest(double heading_change_deg) const;
    std::vector<RelationSample> relation_samples() const;
};

CellSet build_cell_set(const ShipParams& params, double radius_m, double resolution_deg,
                       const CellOptions& options = {});

/// Places a ship-frame cell at a world pose: positions rotated by `heading` and
/// translated to `origin`, headings offset by `heading`.
std::vector<ShipState> place_cell(const TrajectoryCell& cell, Vec2 origin, CompassAngle heading);

}  // namespace cgtc
