#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgtc/dynamic_avoidance.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/ship_dynamics.hpp"
#include "cgtc/static_planner.hpp"

namespace cgtc {

/// Forward-simulates `rudder_command_deg` from an arbitrary state for
/// `horizon_s`. The returned samples include the initial state; the last one is
/// a valid start for the next call.
std::vector<ShipState> online_generate(const ShipState& state, const ShipParams& params, double rudder_command_deg,
                                       double horizon_s, double dt);

struct RudderSegment {
    double command_deg = 0.0;
    double duration_s = 0.0;
};

/// Piecewise-constant command version of online_generate.
std::vector<ShipState> online_generate(const ShipState& state, const ShipParams& params,
                                       std::span<const RudderSegment> segments, double dt);

/// 8-connected A* over a square grid of pitch R, tracked with cells whose
/// heading changes are multiples of 45 deg. Throws NoGridPath.
PlanResult grid_baseline_plan(const Scenario& scenario);
PlanResult grid_baseline_plan(const Scenario& scenario, const CellSet& cells);

struct PlannerMetrics {
    double path_length_m = 0.0;
    int steering_count = 0;
    bool reached = false;
    double min_clearance_m = 0.0;
    /// Planner failure, if it threw.
    std::optional<std::string> error;
};

struct ComparisonReport {
    PlannerMetrics circle;
    PlannerMetrics grid;
    /// circle / grid; set only when both planners reached the destination.
    std::optional<double> length_ratio;
    std::optional<double> steering_ratio;
    /// Full results, for artifact output.
    std::optional<PlanResult> circle_plan;
    std::optional<PlanResult> grid_plan;
};

ComparisonReport compare_planners(const Scenario& scenario);

/// Dispatches on the scenario mode.
PlanResult plan_scenario(const Scenario& scenario, const CellSet& cells);
PlanResult plan_scenario(const Scenario& scenario);

/// Reached the destination and never entered an obstacle (or, for dynamic
/// plans, the combined domains of the moving obstacle).
bool plan_is_safe(const Scenario& scenario, const PlanResult& plan);

struct RunOverrides {
    std::optional<double> dt_s;
    std::optional<double> radius_m;
    std::optional<double> resolution_deg;
};

struct RunOutcome {
    PlanResult plan;
    bool safe = false;
    /// 0 success, 1 planning failure.
    int exit_code = 1;
    std::vector<std::filesystem::path> files;
};

void apply_overrides(Scenario& scenario, const RunOverrides& overrides);

/// Loads, plans and writes trajectory.csv, commands.csv, metrics.json (and
/// separation.csv for dynamic plans) into `out_dir`.
RunOutcome run_scenario(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                        const RunOverrides& overrides = {});

/// Runs both planners and writes compare.json plus each planner's trajectory
/// and command files into `out_dir`.
ComparisonReport run_comparison(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                                const RunOverrides& overrides = {});

}  // namespace cgtc
