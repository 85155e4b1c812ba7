// Batch command line front end: cell generation, relation fitting, planning,
// planner comparison and turning tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgtc/circle_grid.hpp"
#include "cgtc/error.hpp"
#include "cgtc/io.hpp"
#include "cgtc/relation_fit.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/ship_dynamics.hpp"
#include "cgtc/sim_harness.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace fs = std::filesystem;
using namespace cgtc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPlanningFailure = 1;
constexpr int kExitInputError = 2;

// Errors that describe bad input rather than an unsolvable planning problem.
bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::ValidationError:
        case ErrorCode::NonPositiveDt:
        case ErrorCode::LengthMismatch:
        case ErrorCode::ZeroVariance:
        case ErrorCode::InsufficientSamples:
        case ErrorCode::FactorOutOfRange:
        case ErrorCode::StartInsideObstacle:
        case ErrorCode::DestinationInsideObstacle:
        case ErrorCode::CoincidentPoints:
            return true;
        default:
            return false;
    }
}

struct Common {
    std::optional<double> dt;
    std::optional<double> radius;
    std::optional<double> resolution;
    std::string out_dir = "out";

    RunOverrides overrides() const { return {dt, radius, resolution}; }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--dt", c.dt, "Integration step [s]")->check(CLI::PositiveNumber);
    cmd->add_option("--radius", c.radius, "Circle-grid radius [m]")->check(CLI::PositiveNumber);
    cmd->add_option("--resolution", c.resolution, "Cell heading resolution [deg]")->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", c.out_dir, "Output directory");
}

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

int gen_cells(const Common& c, const std::string& scenario_path) {
    ShipParams ship;
    SimConfig sim;
    std::optional<double> scenario_radius;
    if (!scenario_path.empty()) {
        const Scenario sc = load_scenario(scenario_path);
        ship = sc.ship;
        sim = sc.sim;
        scenario_radius = sc.radius();
    }
    CellOptions opts;
    opts.dt_s = c.dt.value_or(sim.dt_s);
    opts.adjust_duration_s = sim.adjust_duration_s;
    const double radius = c.radius.value_or(scenario_radius.value_or(ship_domain_radius(ship, 6.0)));
    const CellSet cells = build_cell_set(ship, radius, c.resolution.value_or(sim.cell_resolution_deg), opts);
    const auto files = write_cell_bundle(cells, c.out_dir);

    int failing = 0;
    for (const auto& cell : cells.cells) failing += validate_rules(cell, ship).all() ? 0 : 1;
    std::cout << cells.cells.size() << " cells at R=" << fmt(radius, 1) << " m, " << files.size() << " files in "
              << c.out_dir << "\n";
    const auto& r = cells.relation;
    std::cout << "relation: " << r.a() << " d^3 + " << r.b() << " d^2 + " << r.c() << " d + " << r.d() << "\n";
    if (failing > 0) {
        std::cerr << failing << " cells violate the cell rules\n";
        return kExitPlanningFailure;
    }
    return kExitOk;
}

int fit_relation(const Common& c, const std::string& csv, bool write) {
    const auto samples = read_relation_csv(csv);
    const std::string report = relation_report_json(samples);
    std::cout << report;
    if (write) {
        fs::create_directories(c.out_dir);
        write_text(fs::path(c.out_dir) / "relation_fit.json", report);
    }
    return kExitOk;
}

int plan(const Common& c, const std::string& path) {
    const RunOutcome out = run_scenario(path, c.out_dir, c.overrides());
    std::cout << (out.plan.reached ? "reached" : "not reached") << (out.safe ? ", safe" : ", unsafe")
              << ": length " << fmt(out.plan.path_length_m, 1) << " m, steering " << out.plan.steering_count
              << ", steps " << out.plan.steps.size() << " (" << out.plan.message << ")\n";
    return out.exit_code;
}

int compare(const Common& c, const std::string& path) {
    const ComparisonReport rep = run_comparison(path, c.out_dir, c.overrides());
    const auto line = [](const char* name, const PlannerMetrics& m) {
        std::cout << name << ": ";
        if (m.error) {
            std::cout << "error " << *m.error << "\n";
            return;
        }
        std::cout << (m.reached ? "reached" : "not reached") << ", length " << fmt(m.path_length_m, 1)
                  << " m, steering " << m.steering_count << ", clearance " << fmt(m.min_clearance_m, 1) << " m\n";
    };
    line("circle", rep.circle);
    line("grid  ", rep.grid);
    if (rep.length_ratio) std::cout << "length ratio " << fmt(*rep.length_ratio) << "\n";
    if (rep.steering_ratio) std::cout << "steering ratio " << fmt(*rep.steering_ratio) << "\n";
    return rep.circle.reached && rep.grid.reached ? kExitOk : kExitPlanningFailure;
}

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_input_error(e.code()) ? kExitInputError : kExitPlanningFailure;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int batch(const Common& c, const std::string& dir) {
    if (!fs::is_directory(dir)) {
        std::cerr << "error: not a directory: " << dir << "\n";
        return kExitInputError;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::string summary = "scenario,exit_code\n";
    int worst = kExitOk;
    for (const auto& f : files) {
        Common sub = c;
        sub.out_dir = (fs::path(c.out_dir) / f.stem()).string();
        std::cout << f.stem().string() << ": " << std::flush;
        const int code = run_guarded([&] { return plan(sub, f.string()); });
        if (code != kExitOk) std::cout << "exit " << code << "\n";
        summary += f.stem().string() + "," + std::to_string(code) + "\n";
        worst = std::max(worst, code);
    }
    fs::create_directories(c.out_dir);
    write_text(fs::path(c.out_dir) / "summary.csv", summary);
    return worst;
}

int turn_test(const Common& c, const std::vector<double>& rudders, double duration) {
    const ShipParams ship;
    const double dt = c.dt.value_or(0.5);
    fs::create_directories(c.out_dir);
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (double rudder : rudders) {
        const auto track = simulate_turn(ship, rudder, duration, dt);
        std::vector<double> times(track.size());
        for (std::size_t i = 0; i < times.size(); ++i) times[i] = dt * static_cast<double>(i);
        const long tag = std::lround(std::abs(rudder));
        const std::string name = std::string("turn_") + (rudder < 0 ? "port_" : "stbd_") + std::to_string(tag) + ".csv";
        write_text(fs::path(c.out_dir) / name, trajectory_csv(track, times));

        // Fit only the settled part of the turn.
        const std::size_t settled = std::min(track.size() - 3, static_cast<std::size_t>(60.0 / dt));
        const CircleFit fit = fit_circle(std::span(track).subspan(settled));
        report.push_back({{"rudder_deg", rudder},
                          {"turning_radius_m", fit.radius_m},
                          {"min_cross_track_m", min_cross_track(track)},
                          {"file", name}});
        std::cout << "rudder " << fmt(rudder, 1) << " deg: radius " << fmt(fit.radius_m, 1) << " m\n";
    }
    write_text(fs::path(c.out_dir) / "turn_test.json", report.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circle-grid trajectory-cell planner for surface vessels"};
    app.require_subcommand(1);

    Common common;
    std::string scenario_path, csv_path, dir_path;
    bool write_report = false;
    std::vector<double> rudders{35.0, -35.0};
    double duration = 600.0;

    auto* gen = app.add_subcommand("gen-cells", "Generate the trajectory cell set");
    add_common(gen, common);
    gen->add_option("--scenario", scenario_path, "Take ship and timing parameters from a scenario")
        ->check(CLI::ExistingFile);

    auto* fit = app.add_subcommand("fit-relation", "Fit the rudder/heading-change relation of a CSV table");
    add_common(fit, common);
    fit->add_option("table", csv_path, "CSV of rudder_deg,heading_deg rows")->required();
    fit->add_flag("--write", write_report, "Also write relation_fit.json into the output directory");

    auto* pl = app.add_subcommand("plan", "Plan one scenario");
    add_common(pl, common);
    pl->add_option("scenario", scenario_path, "Scenario file")->required();

    auto* cmp = app.add_subcommand("compare", "Run the circle planner and the grid baseline on one scenario");
    add_common(cmp, common);
    cmp->add_option("scenario", scenario_path, "Scenario file")->required();

    auto* bat = app.add_subcommand("batch", "Plan every scenario file of a directory");
    add_common(bat, common);
    bat->add_option("dir", dir_path, "Directory of scenario files")->required();

    auto* turn = app.add_subcommand("turn-test", "Steady turning circles at fixed rudder");
    add_common(turn, common);
    turn->add_option("--rudder", rudders, "Rudder angles [deg]");
    turn->add_option("--duration", duration, "Simulated time per turn [s]")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    return run_guarded([&] {
        if (*gen) return gen_cells(common, scenario_path);
        if (*fit) return fit_relation(common, csv_path, write_report);
        if (*pl) return plan(common, scenario_path);
        if (*cmp) return compare(common, scenario_path);
        if (*bat) return batch(common, dir_path);
        return turn_test(common, rudders, duration);
    });
}
