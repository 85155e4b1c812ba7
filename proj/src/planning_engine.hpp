#pragma once

// Step loop shared by the static and dynamic planners.

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "cgtc/scenario.hpp"
#include "cgtc/static_planner.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace cgtc::detail {

struct CandidateCheck {
    /// Hard constraint: no static obstacle entered.
    bool admissible = false;
    /// Positive when the candidate is fully safe; larger is safer.
    double margin = 0.0;
};

/// Judges a candidate cell already placed in the world frame.
using SafetyFn = std::function<CandidateCheck(std::span<const ShipState> samples, std::span<const double> times)>;

class PlanEngine {
public:
    PlanEngine(const Scenario& scenario, const CellSet& cells);

    const GridNode& current() const { return result_.nodes.back(); }
    std::size_t current_index() const { return result_.nodes.size() - 1; }
    double time() const { return result_.times_s.back(); }
    bool at_destination() const;

    /// Heading changes to try for a decision, best first: the decided one,
    /// then neighbours at the cell resolution, starboard first on ties.
    std::vector<double> candidates(double heading_change_deg) const;

    /// Rudder for a heading change through the cell set's relation.
    double rudder_for(double heading_change_deg) const;

    /// Ship-frame cell realizing exactly this heading change (cached).
    const TrajectoryCell& cell_for(double heading_change_deg);

    /// Executes the decision, overriding it with the nearest admissible
    /// candidate when unsafe. Returns false when no candidate is admissible.
    bool advance(const HeadingDecision& decision, const SafetyFn& safety, PlanStep record = {});

    /// Appends a ship-frame cell at the current node without any checks;
    /// `command_deg` is the rudder command reported for the step.
    void append_cell(const TrajectoryCell& cell, double command_deg, PlanStep record);

    PlanResult finish(std::span<const Obstacle> static_obstacles, bool reached, std::string message);

    PlanResult& result() { return result_; }

private:
    const Scenario& scenario_;
    const CellSet& cells_;
    PlanResult result_;
    // Keyed by heading change in millidegrees.
    std::map<long long, TrajectoryCell> cell_cache_;
};

/// Decision for holding `target`: one step when within the maximum heading
/// change, otherwise the maximum change toward it (dead astern: starboard).
HeadingDecision decide_bearing(const GridNode& pose, CompassAngle target, const CellSet& cells);

/// Steering aims at tangents of discs grown by this fraction of R. A path laid
/// exactly on a tangent grazes the disc, and sampling noise alone would then
/// trip the safety check.
inline constexpr double kTrackingMarginFraction = 0.01;

/// Copies of the obstacles grown by the tracking margin, for heading decisions.
std::vector<Obstacle> steering_discs(std::span<const Obstacle> obstacles, double radius_m);

/// Static-obstacle check for a candidate cell.
CandidateCheck static_check(std::span<const ShipState> samples, std::span<const Obstacle> obstacles);

}  // namespace cgtc::detail
