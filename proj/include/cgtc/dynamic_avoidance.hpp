#pragma once

#include <span>
#include <vector>

#include "cgtc/circle_grid.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/static_planner.hpp"

namespace cgtc {

/// Straight-line encounter between the own vessel and one moving obstacle.
struct Encounter {
    GridNode own_pose;
    double own_speed_mps = 0.0;
    Obstacle obstacle;
    /// Forward intersection M of the two tracks.
    Vec2 meeting_point;
    /// Own run to M, obstacle run during that time, and the time itself.
    double l_s_m = 0.0;
    double l_o_m = 0.0;
    double t_s = 0.0;
    /// Own domain radius R and obstacle domain radius R_o.
    double R_m = 0.0;
    double R_o_m = 0.0;
};

/// Forward intersection of the own heading ray with the obstacle course ray.
/// Throws ParallelCourses or NoForwardIntersection.
Vec2 heading_intersection(const GridNode& own, const Obstacle& obstacle);

/// Builds the encounter for the current geometry; R_o is the obstacle radius.
Encounter make_encounter(const GridNode& own, double own_speed_mps, const Obstacle& obstacle, double own_radius_m);

enum class EncounterClass { MaintainOwnFirst, MaintainObstacleFirst, MustSteer };

const char* to_string(EncounterClass c);

struct Classification {
    EncounterClass kind = EncounterClass::MustSteer;
    /// Obstacle speed at or below which the own vessel clears M first.
    double v_lo_mps = 0.0;
    /// Obstacle speed at or above which the obstacle clears M first.
    double v_hi_mps = 0.0;
    /// Set when |CM| or |OM| does not exceed R + R_o and a bound degenerates.
    bool degenerate = false;
};

Classification classify_encounter(const Encounter& enc);

struct VirtualObstacle {
    Vec2 center;
    double radius_m = 0.0;
    /// False when even the smallest radius already satisfies the separation.
    bool constraint_active = true;

    Obstacle as_obstacle() const { return Obstacle{center, radius_m, 0.0, CompassAngle{}}; }
};

/// Positions at the moment the own vessel is abeam the virtual disc of
/// radius `rx`: own domain tangent to the disc after a straight tangent run.
struct VirtualPass {
    Vec2 own_at_pass;       // C_x
    Vec2 obstacle_at_pass;  // O_x
    double l_s_m = 0.0;
    double l_o_m = 0.0;
    double t_s = 0.0;
    CompassAngle own_bearing;  // bearing of C_x from C
};

VirtualPass virtual_pass(const Encounter& enc, double rx);

/// |O_x C_x| - (R + R_o) for a virtual radius `rx`.
double virtual_separation_margin(const Encounter& enc, double rx);

/// Smallest virtual radius whose pass keeps |O_x C_x| >= R + R_o, found by a
/// scan for the first feasible radius refined by bisection. Throws
/// NoFeasibleRadius when no radius below |CM| works.
VirtualObstacle virtual_obstacle_radius(const Encounter& enc);

/// Pointwise distances between two equally timed tracks and their minimum.
struct SeparationSeries {
    std::vector<double> distance_m;
    double minimum_m = 0.0;
};

SeparationSeries min_separation(std::span<const ShipState> own_traj, std::span<const Vec2> obstacle_track);

/// Plans around one moving obstacle (plus static ones): maintain course when
/// the speed bounds allow, otherwise bypass a virtual obstacle at M.
PlanResult plan_dynamic(const Scenario& scenario);
PlanResult plan_dynamic(const Scenario& scenario, const CellSet& cells);

}  // namespace cgtc
