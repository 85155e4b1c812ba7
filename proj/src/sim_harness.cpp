#include "cgtc/sim_harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include <json.hpp>

#include "cgtc/error.hpp"
#include "cgtc/io.hpp"
#include "planning_engine.hpp"

namespace cgtc {

std::vector<ShipState> online_generate(const ShipState& state, const ShipParams& params, double rudder_command_deg,
                                       double horizon_s, double dt) {
    const RudderSegment seg{rudder_command_deg, horizon_s};
    return online_generate(state, params, std::span<const RudderSegment>(&seg, 1), dt);
}

std::vector<ShipState> online_generate(const ShipState& state, const ShipParams& params,
                                       std::span<const RudderSegment> segments, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "dt must be positive");
    std::vector<ShipState> out{state};
    for (const auto& seg : segments) {
        // Whole steps only, so chained calls line up sample for sample.
        const auto steps = static_cast<long>(std::llround(seg.duration_s / dt));
        for (long i = 0; i < steps; ++i) out.push_back(step(out.back(), params, seg.command_deg, dt));
    }
    return out;
}

namespace {

// A grid node is blocked when an obstacle reaches into its square cell; the
// disc is grown by the cell's half diagonal, in grid pitches.
constexpr double kGridInflation = 0.70710678118654752;

constexpr std::array<std::array<int, 2>, 8> kMoves{{{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}}};

struct Leg {
    Vec2 from;
    Vec2 to;
    CompassAngle heading;
};

class GridSearch {
public:
    GridSearch(Vec2 origin, double pitch, std::span<const Obstacle> obstacles, Vec2 destination)
        : origin_(origin), pitch_(pitch), obstacles_(obstacles) {
        double lo_x = std::min(origin.x, destination.x), hi_x = std::max(origin.x, destination.x);
        double lo_y = std::min(origin.y, destination.y), hi_y = std::max(origin.y, destination.y);
        for (const auto& o : obstacles) {
            lo_x = std::min(lo_x, o.center.x - o.radius_m);
            hi_x = std::max(hi_x, o.center.x + o.radius_m);
            lo_y = std::min(lo_y, o.center.y - o.radius_m);
            hi_y = std::max(hi_y, o.center.y + o.radius_m);
        }
        const int pad = 3;
        i0_ = static_cast<int>(std::floor((lo_x - origin.x) / pitch)) - pad;
        j0_ = static_cast<int>(std::floor((lo_y - origin.y) / pitch)) - pad;
        ni_ = static_cast<int>(std::ceil((hi_x - origin.x) / pitch)) + pad - i0_ + 1;
        nj_ = static_cast<int>(std::ceil((hi_y - origin.y) / pitch)) + pad - j0_ + 1;
    }

    Vec2 point(int i, int j) const { return origin_ + Vec2{i * pitch_, j * pitch_}; }
    bool inside(int i, int j) const { return i >= i0_ && j >= j0_ && i < i0_ + ni_ && j < j0_ + nj_; }

    bool free(int i, int j) const {
        const Vec2 p = point(i, j);
        return std::all_of(obstacles_.begin(), obstacles_.end(),
                           [&](const Obstacle& o) { return distance(p, o.center) > inflated(o); });
    }

    bool edge_free(int i, int j, int k, int l) const {
        const Vec2 a = point(i, j), b = point(k, l);
        return std::all_of(obstacles_.begin(), obstacles_.end(),
                           [&](const Obstacle& o) { return point_segment_distance(o.center, a, b) > inflated(o); });
    }

    std::pair<int, int> nearest_free(Vec2 p) const {
        std::optional<std::pair<int, int>> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = i0_; i < i0_ + ni_; ++i) {
            for (int j = j0_; j < j0_ + nj_; ++j) {
                const double d = distance(point(i, j), p);
                if (d < best_d - 1e-9 && free(i, j)) {
                    best_d = d;
                    best = std::pair{i, j};
                }
            }
        }
        if (!best) throw Error(ErrorCode::NoGridPath, "no free grid node near the destination");
        return *best;
    }

    /// Grid node sequence from (0, 0) to `goal`.
    std::vector<std::pair<int, int>> search(std::pair<int, int> goal, CompassAngle start_heading) const {
        // State: cell plus the arriving move direction (8 = initial heading).
        const auto index = [&](int i, int j, int d) {
            return (static_cast<std::size_t>(i - i0_) * nj_ + (j - j0_)) * 9 + d;
        };
        const std::size_t n = static_cast<std::size_t>(ni_) * nj_ * 9;
        std::vector<double> g(n, std::numeric_limits<double>::infinity());
        std::vector<double> turn(n, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> parent(n, n);
        std::vector<bool> closed(n, false);

        const Vec2 goal_pt = point(goal.first, goal.second);
        const auto h = [&](int i, int j) { return distance(point(i, j), goal_pt); };
        const auto heading_of = [&](int d) {
            return d == 8 ? start_heading : CompassAngle(45.0 * d);
        };

        // Ordered by f (quantized so equal-length paths tie), then accumulated
        // turning, then insertion order.
        using Item = std::tuple<long long, double, std::size_t, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        std::size_t counter = 0;
        const std::size_t s0 = index(0, 0, 8);
        g[s0] = 0.0;
        turn[s0] = 0.0;
        open.emplace(std::llround(h(0, 0) * 1e6), 0.0, counter++, s0);

        while (!open.empty()) {
            const auto [f, t, order, s] = open.top();
            open.pop();
            if (closed[s]) continue;
            closed[s] = true;
            const int d = static_cast<int>(s % 9);
            const std::size_t cell = s / 9;
            const int i = static_cast<int>(cell / nj_) + i0_;
            const int j = static_cast<int>(cell % nj_) + j0_;
            if (i == goal.first && j == goal.second) {
                std::vector<std::pair<int, int>> path;
                for (std::size_t k = s; k != n; k = parent[k]) {
                    const std::size_t c = k / 9;
                    path.emplace_back(static_cast<int>(c / nj_) + i0_, static_cast<int>(c % nj_) + j0_);
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            for (int m = 0; m < 8; ++m) {
                const int ni = i + kMoves[m][0], nj = j + kMoves[m][1];
                if (!inside(ni, nj) || !free(ni, nj) || !edge_free(i, j, ni, nj)) continue;
                const std::size_t ns = index(ni, nj, m);
                if (closed[ns]) continue;
                const double ng = g[s] + distance(point(i, j), point(ni, nj));
                const double nt = turn[s] + std::abs(signed_difference(heading_of(m), heading_of(d)));
                const long long key_new = std::llround((ng + h(ni, nj)) * 1e6);
                const bool better = std::isinf(g[ns]) || [&] {
                    const long long key_old = std::llround((g[ns] + h(ni, nj)) * 1e6);
                    return key_new < key_old || (key_new == key_old && nt < turn[ns]);
                }();
                if (better) {
                    g[ns] = ng;
                    turn[ns] = nt;
                    parent[ns] = s;
                    open.emplace(key_new, nt, counter++, ns);
                }
            }
        }
        throw Error(ErrorCode::NoGridPath, "grid search found no path to the destination");
    }

private:
    double inflated(const Obstacle& o) const { return o.radius_m + kGridInflation * pitch_; }

    Vec2 origin_;
    double pitch_;
    std::span<const Obstacle> obstacles_;
    int i0_ = 0, j0_ = 0, ni_ = 0, nj_ = 0;
};

std::vector<Leg> merge_legs(const GridSearch& grid, const std::vector<std::pair<int, int>>& path) {
    std::vector<Leg> legs;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const Vec2 a = grid.point(path[k - 1].first, path[k - 1].second);
        const Vec2 b = grid.point(path[k].first, path[k].second);
        const CompassAngle heading(std::round(compass_bearing(a, b).degrees() / 45.0) * 45.0);
        if (!legs.empty() && std::abs(signed_difference(legs.back().heading, heading)) < 1e-6) {
            legs.back().to = b;
        } else {
            legs.push_back({a, b, heading});
        }
    }
    return legs;
}

// Heading changes below this are treated as already aligned.
constexpr double kAlignedDeg = 0.5;

}  // namespace

PlanResult grid_baseline_plan(const Scenario& scenario) {
    return grid_baseline_plan(scenario, build_scenario_cells(scenario));
}

PlanResult grid_baseline_plan(const Scenario& scenario, const CellSet& cells) {
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

    const double pitch = cells.radius_m;
    detail::PlanEngine engine(scenario, cells);
    if (engine.at_destination()) return engine.finish(obstacles, true, "destination reached");

    const GridSearch grid(scenario.start.position, pitch, obstacles, scenario.destination);
    const auto goal = grid.nearest_free(scenario.destination);
    const auto path = grid.search(goal, scenario.start.heading);
    std::vector<Leg> legs = merge_legs(grid, path);
    if (legs.empty()) {
        // Destination snaps onto the start node: head straight for it.
        const CompassAngle h(std::round(compass_bearing(scenario.start.position, scenario.destination).degrees() / 45.0) *
                             45.0);
        legs.push_back({scenario.start.position, scenario.destination, h});
    }

    const auto heading_change_to = [&](CompassAngle target) {
        const double dh = signed_difference(target, engine.current().heading);
        if (std::abs(dh) < kAlignedDeg) return 0.0;
        return std::clamp(dh, -cells.max_heading_change_deg, cells.max_heading_change_deg);
    };

    std::size_t leg = 0;
    for (int k = 0; k < scenario.sim.max_steps; ++k) {
        if (engine.at_destination()) return engine.finish(obstacles, true, "destination reached");
        const Vec2 pos = engine.current().position;

        // Turn onto the next leg when that lands closer to it than one more
        // straight cell would. At most one leg per step, so short legs are
        // still flown.
        if (leg + 1 < legs.size()) {
            const Leg& cur = legs[leg];
            const double remaining = (cur.to - pos).dot(cur.heading.unit());
            const TrajectoryCell& turn = engine.cell_for(heading_change_to(legs[leg + 1].heading));
            const double dh = deg2rad(turn.heading_change_deg);
            double needed = turn.end_offset.y;
            if (std::abs(std::sin(dh)) > 1e-6) needed -= turn.end_offset.x * std::cos(dh) / std::sin(dh);
            if (remaining <= needed + 0.5 * pitch) ++leg;
        }
        const Leg& cur = legs[leg];
        if (leg + 1 == legs.size() && (pos - cur.to).dot(cur.heading.unit()) > 2.0 * pitch) {
            return engine.finish(obstacles, false, "grid path tracking overshot the destination");
        }

        const double dh = heading_change_to(cur.heading);
        PlanStep record;
        record.decided_bearing = cur.heading;
        record.commanded_heading_change_deg = dh;
        record.two_step = std::abs(signed_difference(cur.heading, engine.current().heading)) > cells.max_heading_change_deg;
        engine.append_cell(engine.cell_for(dh), engine.rudder_for(dh), std::move(record));
    }
    const bool reached = engine.at_destination();
    return engine.finish(obstacles, reached, reached ? "destination reached" : "step budget exhausted");
}

namespace {

PlannerMetrics metrics_of(const PlanResult& plan) {
    return {plan.path_length_m, plan.steering_count, plan.reached, plan.min_clearance_m, std::nullopt};
}

}  // namespace

ComparisonReport compare_planners(const Scenario& scenario) {
    if (scenario.mode == PlanMode::Dynamic) {
        throw Error(ErrorCode::ValidationError, "comparison needs a static or free scenario");
    }
    scenario.validate();
    const CellSet cells = build_scenario_cells(scenario);

    ComparisonReport report;
    try {
        report.circle_plan = plan_static(scenario, cells);
        report.circle = metrics_of(*report.circle_plan);
    } catch (const Error& e) {
        report.circle.error = e.what();
    }
    try {
        report.grid_plan = grid_baseline_plan(scenario, cells);
        report.grid = metrics_of(*report.grid_plan);
    } catch (const Error& e) {
        report.grid.error = e.what();
    }
    if (report.circle.reached && report.grid.reached) {
        if (report.grid.path_length_m > 0.0) report.length_ratio = report.circle.path_length_m / report.grid.path_length_m;
        if (report.grid.steering_count > 0) {
            report.steering_ratio =
                static_cast<double>(report.circle.steering_count) / static_cast<double>(report.grid.steering_count);
        }
    }
    return report;
}

PlanResult plan_scenario(const Scenario& scenario, const CellSet& cells) {
    switch (scenario.mode) {
        case PlanMode::Dynamic: return plan_dynamic(scenario, cells);
        case PlanMode::Free:
        case PlanMode::Static: break;
    }
    return plan_static(scenario, cells);
}

PlanResult plan_scenario(const Scenario& scenario) { return plan_scenario(scenario, build_scenario_cells(scenario)); }

bool plan_is_safe(const Scenario& scenario, const PlanResult& plan) {
    if (!plan.reached) return false;
    bool has_static = false;
    for (const auto& o : scenario.obstacles) {
        if (o.moving()) {
            if (!(plan.min_separation_m > scenario.radius() + o.radius_m)) return false;
        } else {
            has_static = true;
        }
    }
    return !has_static || plan.min_clearance_m > 0.0;
}

void apply_overrides(Scenario& scenario, const RunOverrides& overrides) {
    if (overrides.dt_s) scenario.sim.dt_s = *overrides.dt_s;
    if (overrides.radius_m) scenario.circle_radius_m = *overrides.radius_m;
    if (overrides.resolution_deg) scenario.sim.cell_resolution_deg = *overrides.resolution_deg;
    scenario.validate();
}

namespace {

std::vector<std::filesystem::path> write_plan_files(const std::filesystem::path& dir, const std::string& prefix,
                                                    const Scenario& scenario, const PlanResult& plan, bool safe) {
    std::vector<std::filesystem::path> files{dir / (prefix + "trajectory.csv"), dir / (prefix + "commands.csv"),
                                             dir / (prefix + "metrics.json")};
    write_text(files[0], trajectory_csv(plan.trajectory, plan.times_s));
    write_text(files[1], commands_csv(plan));
    write_text(files[2], metrics_json(scenario, plan, safe));
    if (!plan.separation_m.empty()) {
        files.push_back(dir / (prefix + "separation.csv"));
        write_text(files.back(), separation_csv(plan));
    }
    return files;
}

nlohmann::ordered_json metrics_to_json(const PlannerMetrics& m) {
    nlohmann::ordered_json j;
    j["reached"] = m.reached;
    j["path_length_m"] = m.path_length_m;
    j["steering_count"] = m.steering_count;
    if (std::isfinite(m.min_clearance_m)) {
        j["min_clearance_m"] = m.min_clearance_m;
    } else {
        j["min_clearance_m"] = nullptr;
    }
    if (m.error) j["error"] = *m.error;
    return j;
}

}  // namespace

RunOutcome run_scenario(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                        const RunOverrides& overrides) {
    Scenario scenario = load_scenario(path.string());
    apply_overrides(scenario, overrides);

    RunOutcome outcome;
    outcome.plan = plan_scenario(scenario);
    outcome.safe = plan_is_safe(scenario, outcome.plan);
    outcome.exit_code = outcome.safe ? 0 : 1;
    std::filesystem::create_directories(out_dir);
    outcome.files = write_plan_files(out_dir, "", scenario, outcome.plan, outcome.safe);
    return outcome;
}

ComparisonReport run_comparison(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                                const RunOverrides& overrides) {
    Scenario scenario = load_scenario(path.string());
    apply_overrides(scenario, overrides);
    ComparisonReport report = compare_planners(scenario);

    std::filesystem::create_directories(out_dir);
    if (report.circle_plan) {
        write_plan_files(out_dir, "circle_", scenario, *report.circle_plan, plan_is_safe(scenario, *report.circle_plan));
    }
    if (report.grid_plan) {
        write_plan_files(out_dir, "grid_", scenario, *report.grid_plan, plan_is_safe(scenario, *report.grid_plan));
    }

    nlohmann::ordered_json j;
    j["scenario"] = scenario.name;
    j["circle"] = metrics_to_json(report.circle);
    j["grid"] = metrics_to_json(report.grid);
    j["length_ratio"] = report.length_ratio ? nlohmann::ordered_json(*report.length_ratio) : nullptr;
    j["steering_ratio"] = report.steering_ratio ? nlohmann::ordered_json(*report.steering_ratio) : nullptr;
    write_text(out_dir / "compare.json", j.dump(2) + "\n");
    return report;
}

}  // namespace cgtc
