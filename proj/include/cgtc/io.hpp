#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cgtc/relation_fit.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/ship_dynamics.hpp"
#include "cgtc/static_planner.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace cgtc {

/// Columns: t_s, x_m, y_m, heading_deg, u_mps, v_mps, yaw_rate_degps, rudder_deg.
std::string trajectory_csv(std::span<const ShipState> trajectory, std::span<const double> times_s);

/// Columns: step, delta0_deg, heading_change_deg.
std::string commands_csv(const PlanResult& plan);

/// Columns: t_s, distance_m.
std::string separation_csv(const PlanResult& plan);

/// Metrics report as JSON text.
std::string metrics_json(const Scenario& scenario, const PlanResult& plan, bool safe);

/// Cell samples: t, x, y, heading, u, v, rudder.
std::string cell_csv(const TrajectoryCell& cell);

/// Writes one CSV per cell plus index.csv (heading_change_deg, delta0_deg,
/// duration_s, arc_length_m) and relation.json. Returns the written paths.
std::vector<std::filesystem::path> write_cell_bundle(const CellSet& cells, const std::filesystem::path& dir);

/// Reads (rudder_deg, heading_deg) rows; a non-numeric first line is a header.
std::vector<RelationSample> read_relation_csv(const std::filesystem::path& path);

/// Report of pearson r, cubic coefficients, residual stddev per degree 1..5
/// and the residual table of the cubic fit.
std::string relation_report_json(std::span<const RelationSample> samples);

/// Parses a trajectory CSV written by trajectory_csv.
struct TrajectoryTable {
    std::vector<double> t_s;
    std::vector<ShipState> states;
};
TrajectoryTable read_trajectory_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cgtc
