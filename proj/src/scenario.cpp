#include "cgtc/scenario.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cgtc/circle_grid.hpp"
#include "cgtc/error.hpp"

namespace cgtc {

namespace {

using nlohmann::json;

constexpr double kDefaultDomainFactor = 6.0;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

double number(const json& obj, const std::string& path, const std::string& key) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!obj.contains(key)) fail(field, "missing required number");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(field, "expected a number, got " + std::string(v.type_name()));
    return v.get<double>();
}

void maybe_number(const json& obj, const std::string& path, const std::string& key, double& out) {
    if (obj.contains(key)) out = number(obj, path, key);
}

std::optional<double> optional_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, path, key);
}

// Single table of ship fields, used for both reading and writing.
const std::vector<std::pair<std::string, double ShipParams::*>>& ship_fields() {
    static const std::vector<std::pair<std::string, double ShipParams::*>> fields = {
        {"length_m", &ShipParams::length_m},
        {"beam_m", &ShipParams::beam_m},
        {"draft_m", &ShipParams::draft_m},
        {"steady_speed_mps", &ShipParams::steady_speed_mps},
        {"rudder_limit_port_deg", &ShipParams::rudder_limit_port_deg},
        {"rudder_limit_stbd_deg", &ShipParams::rudder_limit_stbd_deg},
        {"rudder_rate_degps", &ShipParams::rudder_rate_degps},
        {"propeller_rpm", &ShipParams::propeller_rpm},
        {"turn_gain", &ShipParams::turn_gain},
        {"turn_lag_s", &ShipParams::turn_lag_s},
        {"asymmetry_factor", &ShipParams::asymmetry_factor},
        {"kick_gain", &ShipParams::kick_gain},
        {"speed_loss_gain", &ShipParams::speed_loss_gain},
        {"speed_recovery_s", &ShipParams::speed_recovery_s},
    };
    return fields;
}

PlanMode parse_mode(const json& v) {
    if (!v.is_string()) fail("mode", "expected a string");
    const auto s = v.get<std::string>();
    if (s == "free") return PlanMode::Free;
    if (s == "static") return PlanMode::Static;
    if (s == "dynamic") return PlanMode::Dynamic;
    fail("mode", "expected one of free, static, dynamic; got '" + s + "'");
}

std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string to_string(PlanMode mode) {
    switch (mode) {
        case PlanMode::Free: return "free";
        case PlanMode::Static: return "static";
        case PlanMode::Dynamic: return "dynamic";
    }
    return "unknown";
}

double Scenario::radius() const {
    if (circle_radius_m) return *circle_radius_m;
    return ship_domain_radius(ship, domain_factor.value_or(kDefaultDomainFactor));
}

void Scenario::validate() const {
    ship.validate();
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorCode::ValidationError, what);
    };
    require(!(start.position == destination), "start and destination coincide");
    require(sim.dt_s > 0.0, "sim.dt_s must be positive");
    require(sim.max_steps > 0, "sim.max_steps must be positive");
    require(sim.adjust_duration_s > 0.0, "sim.adjust_duration_s must be positive");
    if (circle_radius_m) require(*circle_radius_m > 0.0, "circle_radius_m must be positive");
    if (!circle_radius_m && domain_factor) {
        try {
            (void)ship_domain_radius(ship, *domain_factor);
        } catch (const Error& e) {
            throw Error(ErrorCode::ValidationError, e.what());
        }
    }
    if (reach_tolerance_m) require(*reach_tolerance_m > 0.0, "destination.reach_tolerance_m must be positive");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        const std::string tag = "obstacles[" + std::to_string(i) + "]";
        require(o.radius_m > 0.0, tag + ".radius_m must be positive");
        require(o.speed_mps >= 0.0, tag + ".speed_mps must be non-negative");
    }
    if (mode == PlanMode::Free) require(obstacles.empty(), "free mode takes no obstacles");
    if (mode == PlanMode::Static) {
        for (const auto& o : obstacles) require(!o.moving(), "static mode takes no moving obstacles");
    }
}

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "malformed JSON at " + line_context(text, e.byte) + ": " + e.what());
    }
    reject_unknown(root, "",
                   {"name", "mode", "ship", "start", "destination", "circle_radius_m", "domain_factor", "obstacles",
                    "sim"});

    Scenario sc;
    if (root.contains("name")) {
        if (!root["name"].is_string()) fail("name", "expected a string");
        sc.name = root["name"].get<std::string>();
    }
    if (!root.contains("mode")) fail("mode", "missing");
    sc.mode = parse_mode(root["mode"]);

    if (root.contains("ship")) {
        const json& ship = root["ship"];
        std::set<std::string> allowed;
        for (const auto& [key, _] : ship_fields()) allowed.insert(key);
        reject_unknown(ship, "ship", allowed);
        for (const auto& [key, member] : ship_fields()) maybe_number(ship, "ship", key, sc.ship.*member);
    }

    if (!root.contains("start")) fail("start", "missing");
    reject_unknown(root["start"], "start", {"x_m", "y_m", "heading_deg"});
    sc.start.position = {number(root["start"], "start", "x_m"), number(root["start"], "start", "y_m")};
    sc.start.heading = CompassAngle(number(root["start"], "start", "heading_deg"));

    if (!root.contains("destination")) fail("destination", "missing");
    reject_unknown(root["destination"], "destination", {"x_m", "y_m", "reach_tolerance_m"});
    sc.destination = {number(root["destination"], "destination", "x_m"),
                      number(root["destination"], "destination", "y_m")};
    sc.reach_tolerance_m = optional_number(root["destination"], "destination", "reach_tolerance_m");

    sc.circle_radius_m = optional_number(root, "", "circle_radius_m");
    sc.domain_factor = optional_number(root, "", "domain_factor");

    if (root.contains("obstacles")) {
        const json& list = root["obstacles"];
        if (!list.is_array()) fail("obstacles", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "obstacles[" + std::to_string(i) + "]";
            const json& o = list[i];
            reject_unknown(o, path, {"x_m", "y_m", "radius_m", "speed_mps", "course_deg"});
            Obstacle ob;
            ob.center = {number(o, path, "x_m"), number(o, path, "y_m")};
            ob.radius_m = number(o, path, "radius_m");
            maybe_number(o, path, "speed_mps", ob.speed_mps);
            double course = 0.0;
            maybe_number(o, path, "course_deg", course);
            ob.course = CompassAngle(course);
            sc.obstacles.push_back(ob);
        }
    }

    if (root.contains("sim")) {
        const json& sim = root["sim"];
        reject_unknown(sim, "sim", {"dt_s", "max_steps", "cell_resolution_deg", "adjust_duration_s"});
        maybe_number(sim, "sim", "dt_s", sc.sim.dt_s);
        maybe_number(sim, "sim", "cell_resolution_deg", sc.sim.cell_resolution_deg);
        maybe_number(sim, "sim", "adjust_duration_s", sc.sim.adjust_duration_s);
        if (sim.contains("max_steps")) {
            if (!sim["max_steps"].is_number_integer()) fail("sim.max_steps", "expected an integer");
            sc.sim.max_steps = sim["max_steps"].get<int>();
        }
    }

    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

std::string dump_scenario(const Scenario& sc) {
    json root;
    root["name"] = sc.name;
    root["mode"] = to_string(sc.mode);
    json ship = json::object();
    for (const auto& [key, member] : ship_fields()) ship[key] = sc.ship.*member;
    root["ship"] = ship;
    root["start"] = {{"x_m", sc.start.position.x}, {"y_m", sc.start.position.y},
                     {"heading_deg", sc.start.heading.degrees()}};
    root["destination"] = {{"x_m", sc.destination.x}, {"y_m", sc.destination.y}};
    if (sc.reach_tolerance_m) root["destination"]["reach_tolerance_m"] = *sc.reach_tolerance_m;
    if (sc.circle_radius_m) root["circle_radius_m"] = *sc.circle_radius_m;
    if (sc.domain_factor) root["domain_factor"] = *sc.domain_factor;
    json obstacles = json::array();
    for (const auto& o : sc.obstacles) {
        obstacles.push_back({{"x_m", o.center.x},
                             {"y_m", o.center.y},
                             {"radius_m", o.radius_m},
                             {"speed_mps", o.speed_mps},
                             {"course_deg", o.course.degrees()}});
    }
    root["obstacles"] = obstacles;
    root["sim"] = {{"dt_s", sc.sim.dt_s},
                   {"max_steps", sc.sim.max_steps},
                   {"cell_resolution_deg", sc.sim.cell_resolution_deg},
                   {"adjust_duration_s", sc.sim.adjust_duration_s}};
    return root.dump(2) + "\n";
}

}  // namespace cgtc
