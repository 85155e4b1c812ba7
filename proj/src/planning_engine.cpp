#include "planning_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cgtc/error.hpp"

namespace cgtc::detail {

PlanEngine::PlanEngine(const Scenario& scenario, const CellSet& cells) : scenario_(scenario), cells_(cells) {
    GridNode root;
    root.position = scenario.start.position;
    root.heading = scenario.start.heading;
    result_.nodes.push_back(root);

    ShipState s = trimmed_state(scenario.ship, scenario.start.heading.degrees());
    s.x_m = scenario.start.position.x;
    s.y_m = scenario.start.position.y;
    result_.trajectory.push_back(s);
    result_.times_s.push_back(0.0);
}

bool PlanEngine::at_destination() const {
    return distance(current().position, scenario_.destination) <= scenario_.reach_tolerance();
}

std::vector<double> PlanEngine::candidates(double heading_change_deg) const {
    const double limit = cells_.max_heading_change_deg;
    const double res = cells_.resolution_deg;
    const double base = std::clamp(heading_change_deg, -limit, limit);
    std::vector<double> out{base};
    for (int k = 1;; ++k) {
        bool added = false;
        for (double sign : {1.0, -1.0}) {
            const double c = base + sign * res * k;
            if (c >= -limit - 1e-9 && c <= limit + 1e-9) {
                out.push_back(std::clamp(c, -limit, limit));
                added = true;
            }
        }
        if (!added) break;
    }
    return out;
}

double PlanEngine::rudder_for(double heading_change_deg) const {
    const auto& rel = cells_.relation;
    const double reachable = std::clamp(heading_change_deg, rel.min_heading_change(), rel.max_heading_change());
    return invert_relation(rel, reachable);
}

const TrajectoryCell& PlanEngine::cell_for(double heading_change_deg) {
    const long long key = std::llround(heading_change_deg * 1000.0);
    auto it = cell_cache_.find(key);
    if (it == cell_cache_.end()) {
        const double target = static_cast<double>(key) / 1000.0;
        it = cell_cache_.emplace(key, generate_cell(scenario_.ship, target, cells_.radius_m, cells_.options)).first;
    }
    return it->second;
}

bool PlanEngine::advance(const HeadingDecision& decision, const SafetyFn& safety, PlanStep record) {
    const GridNode node = current();
    const double t0 = time();

    struct Option {
        double heading_change;
        TrajectoryCell cell;
        std::vector<ShipState> placed;
        std::vector<double> times;
        CandidateCheck check;
    };
    std::optional<Option> chosen;
    std::optional<Option> fallback;

    const auto options = candidates(decision.heading_change_deg);
    for (std::size_t i = 0; i < options.size(); ++i) {
        const double dh = options[i];
        TrajectoryCell cell = cell_for(dh);
        std::vector<ShipState> placed = place_cell(cell, node.position, node.heading);
        std::vector<double> times;
        times.reserve(cell.times_s.size());
        for (double t : cell.times_s) times.push_back(t0 + t);

        const CandidateCheck check = safety(placed, times);
        Option opt{dh, std::move(cell), std::move(placed), std::move(times), check};
        if (check.admissible && check.margin > 0.0) {
            record.safety_override = i != 0;
            chosen = std::move(opt);
            break;
        }
        if (check.admissible && (!fallback || check.margin > fallback->check.margin)) fallback = std::move(opt);
    }
    if (!chosen && fallback) {
        record.safety_override = true;
        chosen = std::move(fallback);
    }
    if (!chosen) return false;

    record.commanded_heading_change_deg = chosen->heading_change;
    if (!record.focused_obstacle) record.focused_obstacle = decision.focused_obstacle;
    record.decided_bearing = decision.target_bearing;
    record.two_step = decision.two_step;
    append_cell(chosen->cell, rudder_for(chosen->heading_change), std::move(record));
    return true;
}

void PlanEngine::append_cell(const TrajectoryCell& cell, double command_deg, PlanStep record) {
    const GridNode node = current();
    const double t0 = time();
    const std::vector<ShipState> placed = place_cell(cell, node.position, node.heading);

    record.node_index = current_index();
    record.realized_heading_change_deg = cell.heading_change_deg;
    record.delta0_deg = command_deg;

    // The first sample duplicates the previous end state.
    for (std::size_t i = 1; i < placed.size(); ++i) {
        result_.trajectory.push_back(placed[i]);
        result_.times_s.push_back(t0 + cell.times_s[i]);
    }
    GridNode child = child_through(node, current_index(), cell);
    // Keep the node on the sampled end point so splices stay exact.
    child.position = {result_.trajectory.back().x_m, result_.trajectory.back().y_m};
    result_.nodes.push_back(child);
    result_.rudder_commands.push_back(command_deg);
    result_.steps.push_back(std::move(record));
}

PlanResult PlanEngine::finish(std::span<const Obstacle> static_obstacles, bool reached, std::string message) {
    result_.reached = reached;
    result_.message = std::move(message);
    result_.path_length_m = path_length(result_.trajectory);
    result_.steering_count = count_steering(result_.rudder_commands);
    result_.min_clearance_m = min_clearance(result_.trajectory, static_obstacles);
    return std::move(result_);
}

HeadingDecision decide_bearing(const GridNode& pose, CompassAngle target, const CellSet& cells) {
    HeadingDecision d;
    d.target_bearing = target;
    const double wanted = target.signed_from(pose.heading);
    const double limit = cells.max_heading_change_deg;
    if (std::abs(wanted) <= limit) {
        d.heading_change_deg = wanted;
    } else {
        d.heading_change_deg = wanted >= 0.0 || wanted == -180.0 ? limit : -limit;
        d.two_step = true;
    }
    return d;
}

std::vector<Obstacle> steering_discs(std::span<const Obstacle> obstacles, double radius_m) {
    std::vector<Obstacle> out(obstacles.begin(), obstacles.end());
    for (auto& o : out) o.radius_m += kTrackingMarginFraction * radius_m;
    return out;
}

CandidateCheck static_check(std::span<const ShipState> samples, std::span<const Obstacle> obstacles) {
    const double clearance = min_clearance(samples, obstacles);
    return {clearance > 0.0, clearance};
}

}  // namespace cgtc::detail
