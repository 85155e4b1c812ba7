#include "cgtc/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cgtc/error.hpp"

namespace cgtc {

namespace {

// Fixed-point formatting keeps every artifact a deterministic function of its inputs.
std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
    return buf;
}

nlohmann::ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

bool parse_double(const std::string& text, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(text, &pos);
    } catch (const std::exception&) {
        return false;
    }
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return pos == text.size();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string trajectory_csv(std::span<const ShipState> trajectory, std::span<const double> times_s) {
    if (trajectory.size() != times_s.size()) {
        throw Error(ErrorCode::LengthMismatch, "trajectory and time stamps differ in length");
    }
    std::string out = "t_s,x_m,y_m,heading_deg,u_mps,v_mps,yaw_rate_degps,rudder_deg\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const ShipState& s = trajectory[i];
        out += num(times_s[i]) + ',' + num(s.x_m) + ',' + num(s.y_m) + ',' + num(s.heading_deg) + ',' + num(s.u_mps) +
               ',' + num(s.v_mps) + ',' + num(s.yaw_rate_degps) + ',' + num(s.rudder_deg) + '\n';
    }
    return out;
}

std::string commands_csv(const PlanResult& plan) {
    std::string out = "step,delta0_deg,heading_change_deg\n";
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        out += std::to_string(i) + ',' + num(plan.steps[i].delta0_deg) + ',' +
               num(plan.steps[i].realized_heading_change_deg) + '\n';
    }
    return out;
}

std::string separation_csv(const PlanResult& plan) {
    std::string out = "t_s,distance_m\n";
    for (std::size_t i = 0; i < plan.separation_m.size() && i < plan.times_s.size(); ++i) {
        out += num(plan.times_s[i]) + ',' + num(plan.separation_m[i]) + '\n';
    }
    return out;
}

std::string metrics_json(const Scenario& scenario, const PlanResult& plan, bool safe) {
    nlohmann::ordered_json j;
    j["scenario"] = scenario.name;
    j["mode"] = to_string(scenario.mode);
    j["radius_m"] = scenario.radius();
    j["reached"] = plan.reached;
    j["safe"] = safe;
    j["path_length_m"] = plan.path_length_m;
    j["steering_count"] = plan.steering_count;
    j["steps"] = plan.steps.size();
    j["duration_s"] = plan.times_s.empty() ? 0.0 : plan.times_s.back();
    j["min_clearance_m"] = finite_or_null(plan.min_clearance_m);
    if (!plan.separation_m.empty()) j["min_separation_m"] = plan.min_separation_m;
    j["message"] = plan.message;
    return j.dump(2) + "\n";
}

std::string cell_csv(const TrajectoryCell& cell) {
    std::string out = "t,x,y,heading,u,v,rudder\n";
    for (std::size_t i = 0; i < cell.samples.size(); ++i) {
        const ShipState& s = cell.samples[i];
        out += num(cell.times_s[i]) + ',' + num(s.x_m) + ',' + num(s.y_m) + ',' + num(s.heading_deg) + ',' +
               num(s.u_mps) + ',' + num(s.v_mps) + ',' + num(s.rudder_deg) + '\n';
    }
    return out;
}

std::vector<std::filesystem::path> write_cell_bundle(const CellSet& cells, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;
    std::string index = "heading_change_deg,delta0_deg,duration_s,arc_length_m\n";
    for (const auto& cell : cells.cells) {
        const long tenths = std::lround(cell.heading_change_deg * 10.0);
        char name[64];
        std::snprintf(name, sizeof name, "cell_%c%04ld.csv", tenths < 0 ? 'm' : 'p', std::labs(tenths));
        files.push_back(dir / name);
        write_text(files.back(), cell_csv(cell));
        index += num(cell.heading_change_deg) + ',' + num(cell.delta0_deg) + ',' + num(cell.duration_s) + ',' +
                 num(cell.arc_length_m) + '\n';
    }
    files.push_back(dir / "index.csv");
    write_text(files.back(), index);

    const CubicRelation& r = cells.relation;
    nlohmann::ordered_json j;
    j["radius_m"] = cells.radius_m;
    j["resolution_deg"] = cells.resolution_deg;
    j["cubic"] = {{"a", r.a()}, {"b", r.b()}, {"c", r.c()}, {"d", r.d()}};
    j["domain_deg"] = {r.domain_lo_deg(), r.domain_hi_deg()};
    files.push_back(dir / "relation.json");
    write_text(files.back(), j.dump(2) + "\n");
    return files;
}

std::vector<RelationSample> read_relation_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<RelationSample> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto fields = split_csv(line);
        double rudder = 0.0, heading = 0.0;
        const bool ok = fields.size() == 2 && parse_double(fields[0], rudder) && parse_double(fields[1], heading);
        if (!ok) {
            if (lineno == 1) continue;  // header
            throw Error(ErrorCode::ParseError,
                        path.string() + ":" + std::to_string(lineno) + ": expected 'rudder_deg,heading_deg'");
        }
        out.push_back({rudder, heading});
    }
    return out;
}

std::string relation_report_json(std::span<const RelationSample> samples) {
    nlohmann::ordered_json j;
    j["samples"] = samples.size();
    j["pearson_r"] = pearson(samples);

    nlohmann::ordered_json stds = nlohmann::ordered_json::array();
    const int max_degree = std::min<int>(5, static_cast<int>(samples.size()) - 1);
    for (int deg = 1; deg <= max_degree; ++deg) stds.push_back(fit_poly(samples, deg).residual_stddev);
    j["residual_stddev_by_degree"] = stds;

    if (samples.size() > 3) {
        const PolyFit cubic = fit_poly(samples, 3);
        j["cubic"] = {{"a", cubic.coefficients[3]},
                      {"b", cubic.coefficients[2]},
                      {"c", cubic.coefficients[1]},
                      {"d", cubic.coefficients[0]}};
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < samples.size(); ++i) {
            rows.push_back({{"rudder_deg", samples[i].rudder_deg},
                            {"heading_deg", samples[i].heading_change_deg},
                            {"fitted_deg", cubic(samples[i].rudder_deg)},
                            {"residual_deg", cubic.residuals[i]}});
        }
        j["cubic_residuals"] = rows;
    }
    return j.dump(2) + "\n";
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    TrajectoryTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        const auto fields = split_csv(line);
        double v[8];
        bool ok = fields.size() == 8;
        for (std::size_t k = 0; ok && k < 8; ++k) ok = parse_double(fields[k], v[k]);
        if (!ok) throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(lineno) + ": bad row");
        table.t_s.push_back(v[0]);
        table.states.push_back({v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
    }
    return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path.string());
    out << text;
}

}  // namespace cgtc
