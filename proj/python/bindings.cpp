#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cgtc/circle_grid.hpp"
#include "cgtc/dynamic_avoidance.hpp"
#include "cgtc/error.hpp"
#include "cgtc/io.hpp"
#include "cgtc/relation_fit.hpp"
#include "cgtc/scenario.hpp"
#include "cgtc/ship_dynamics.hpp"
#include "cgtc/sim_harness.hpp"
#include "cgtc/static_planner.hpp"
#include "cgtc/trajectory_cell.hpp"

namespace py = pybind11;
using namespace cgtc;

namespace {

py::tuple xy(Vec2 v) { return py::make_tuple(v.x, v.y); }

Vec2 to_vec(const std::pair<double, double>& p) { return {p.first, p.second}; }

py::dict metrics_dict(const PlannerMetrics& m) {
    py::dict d;
    d["path_length_m"] = m.path_length_m;
    d["steering_count"] = m.steering_count;
    d["reached"] = m.reached;
    d["min_clearance_m"] = m.min_clearance_m;
    d["error"] = m.error ? py::cast(*m.error) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_cgtc, m) {
    m.doc() = "Circle-grid trajectory-cell motion planning for surface vessels";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result([&] { return py::exception<Error>(m, "CgtcError", PyExc_ValueError); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& type = error_type.get_stored();
            py::object exc = type(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(type.ptr(), exc.ptr());
        }
    });

    py::class_<ShipParams>(m, "ShipParams")
        .def(py::init<>())
        .def_readwrite("length_m", &ShipParams::length_m)
        .def_readwrite("steady_speed_mps", &ShipParams::steady_speed_mps)
        .def_readwrite("rudder_limit_port_deg", &ShipParams::rudder_limit_port_deg)
        .def_readwrite("rudder_limit_stbd_deg", &ShipParams::rudder_limit_stbd_deg)
        .def_readwrite("rudder_rate_degps", &ShipParams::rudder_rate_degps)
        .def_readwrite("turn_gain", &ShipParams::turn_gain)
        .def_readwrite("turn_lag_s", &ShipParams::turn_lag_s)
        .def_readwrite("asymmetry_factor", &ShipParams::asymmetry_factor)
        .def_readwrite("kick_gain", &ShipParams::kick_gain)
        .def_readwrite("speed_loss_gain", &ShipParams::speed_loss_gain)
        .def_readwrite("speed_recovery_s", &ShipParams::speed_recovery_s)
        .def("validate", &ShipParams::validate);

    py::class_<ShipState>(m, "ShipState")
        .def(py::init<>())
        .def_readwrite("x_m", &ShipState::x_m)
        .def_readwrite("y_m", &ShipState::y_m)
        .def_readwrite("heading_deg", &ShipState::heading_deg)
        .def_readwrite("u_mps", &ShipState::u_mps)
        .def_readwrite("v_mps", &ShipState::v_mps)
        .def_readwrite("yaw_rate_degps", &ShipState::yaw_rate_degps)
        .def_readwrite("rudder_deg", &ShipState::rudder_deg)
        .def("__repr__", [](const ShipState& s) {
            return "ShipState(x=" + std::to_string(s.x_m) + ", y=" + std::to_string(s.y_m) +
                   ", heading=" + std::to_string(s.heading_deg) + ")";
        });

    m.def("trimmed_state", &trimmed_state, py::arg("params"), py::arg("heading_deg") = 0.0);
    m.def("step", py::overload_cast<const ShipState&, const ShipParams&, double, double>(&step), py::arg("state"),
          py::arg("params"), py::arg("rudder_command_deg"), py::arg("dt"));
    m.def("simulate_turn", &simulate_turn, py::arg("params"), py::arg("rudder_deg"), py::arg("duration_s"),
          py::arg("dt"));
    m.def("online_generate",
          py::overload_cast<const ShipState&, const ShipParams&, double, double, double>(&online_generate),
          py::arg("state"), py::arg("params"), py::arg("rudder_command_deg"), py::arg("horizon_s"), py::arg("dt"));

    m.def("pearson", [](const std::vector<double>& xs, const std::vector<double>& ys) { return pearson(xs, ys); });
    py::class_<PolyFit>(m, "PolyFit")
        .def_readonly("coefficients", &PolyFit::coefficients)
        .def_readonly("residuals", &PolyFit::residuals)
        .def_readonly("residual_stddev", &PolyFit::residual_stddev)
        .def("__call__", &PolyFit::operator());
    m.def("fit_poly",
          [](const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
              return fit_poly(xs, ys, degree);
          },
          py::arg("xs"), py::arg("ys"), py::arg("degree"));

    py::class_<CubicRelation>(m, "CubicRelation")
        .def(py::init<double, double, double, double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"),
             py::arg("d"), py::arg("domain_lo_deg"), py::arg("domain_hi_deg"))
        .def_property_readonly("coefficients",
                               [](const CubicRelation& r) { return py::make_tuple(r.a(), r.b(), r.c(), r.d()); })
        .def("heading_change", &CubicRelation::heading_change)
        .def("invert", [](const CubicRelation& r, double h) { return invert_relation(r, h); });

    py::class_<TrajectoryCell>(m, "TrajectoryCell")
        .def_readonly("samples", &TrajectoryCell::samples)
        .def_readonly("times_s", &TrajectoryCell::times_s)
        .def_readonly("delta0_deg", &TrajectoryCell::delta0_deg)
        .def_readonly("heading_change_deg", &TrajectoryCell::heading_change_deg)
        .def_property_readonly("end_offset", [](const TrajectoryCell& c) { return xy(c.end_offset); })
        .def_readonly("central_angle_deg", &TrajectoryCell::central_angle_deg)
        .def_readonly("arc_length_m", &TrajectoryCell::arc_length_m)
        .def_readonly("duration_s", &TrajectoryCell::duration_s);
    m.def("generate_cell",
          [](const ShipParams& p, double target, double radius) { return generate_cell(p, target, radius); },
          py::arg("params"), py::arg("target_heading_change_deg"), py::arg("radius_m"));

    py::class_<CellSet>(m, "CellSet")
        .def_readonly("radius_m", &CellSet::radius_m)
        .def_readonly("resolution_deg", &CellSet::resolution_deg)
        .def_readonly("cells", &CellSet::cells)
        .def_readonly("relation", &CellSet::relation);
    m.def("build_cell_set",
          [](const ShipParams& p, double radius, double resolution) { return build_cell_set(p, radius, resolution); },
          py::arg("params"), py::arg("radius_m"), py::arg("resolution_deg") = 5.0);
    m.def("rules_hold", [](const TrajectoryCell& c, const ShipParams& p) { return validate_rules(c, p).all(); });
    m.def("ship_domain_radius", &ship_domain_radius, py::arg("params"), py::arg("factor"));

    m.def(
        "tangent_angles",
        [](std::pair<double, double> current, std::pair<double, double> center, double radius) {
            Obstacle o;
            o.center = to_vec(center);
            o.radius_m = radius;
            const auto [left, right] = tangent_angles(to_vec(current), o);
            return py::make_tuple(left.degrees(), right.degrees());
        },
        py::arg("current"), py::arg("center"), py::arg("radius_m"));

    m.def(
        "classify_encounter",
        [](std::pair<double, double> own, double heading, double own_speed, std::pair<double, double> obstacle,
           double course, double speed, double own_radius, double obstacle_radius) {
            GridNode node;
            node.position = to_vec(own);
            node.heading = CompassAngle(heading);
            Obstacle o{to_vec(obstacle), obstacle_radius, speed, CompassAngle(course)};
            const Classification c = classify_encounter(make_encounter(node, own_speed, o, own_radius));
            py::dict d;
            d["kind"] = std::string(to_string(c.kind));
            d["v_lo_mps"] = c.v_lo_mps;
            d["v_hi_mps"] = c.v_hi_mps;
            d["degenerate"] = c.degenerate;
            return d;
        },
        py::arg("own"), py::arg("heading_deg"), py::arg("own_speed_mps"), py::arg("obstacle"), py::arg("course_deg"),
        py::arg("speed_mps"), py::arg("own_radius_m"), py::arg("obstacle_radius_m"));

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_property_readonly("mode", [](const Scenario& s) { return to_string(s.mode); })
        .def("radius", &Scenario::radius)
        .def("dumps", [](const Scenario& s) { return dump_scenario(s); });
    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::class_<PlanResult>(m, "PlanResult")
        .def_readonly("trajectory", &PlanResult::trajectory)
        .def_readonly("times_s", &PlanResult::times_s)
        .def_readonly("rudder_commands", &PlanResult::rudder_commands)
        .def_readonly("path_length_m", &PlanResult::path_length_m)
        .def_readonly("steering_count", &PlanResult::steering_count)
        .def_readonly("reached", &PlanResult::reached)
        .def_readonly("min_clearance_m", &PlanResult::min_clearance_m)
        .def_readonly("separation_m", &PlanResult::separation_m)
        .def_readonly("min_separation_m", &PlanResult::min_separation_m)
        .def_readonly("message", &PlanResult::message);
    m.def("plan_scenario", py::overload_cast<const Scenario&>(&plan_scenario), py::arg("scenario"));
    m.def("grid_baseline_plan", py::overload_cast<const Scenario&>(&grid_baseline_plan), py::arg("scenario"));
    m.def("plan_is_safe", &plan_is_safe, py::arg("scenario"), py::arg("plan"));
    m.def(
        "compare_planners",
        [](const Scenario& s) {
            const ComparisonReport r = compare_planners(s);
            py::dict d;
            d["circle"] = metrics_dict(r.circle);
            d["grid"] = metrics_dict(r.grid);
            d["length_ratio"] = r.length_ratio ? py::cast(*r.length_ratio) : py::none();
            d["steering_ratio"] = r.steering_ratio ? py::cast(*r.steering_ratio) : py::none();
            return d;
        },
        py::arg("scenario"));
    m.def(
        "run_scenario",
        [](const std::filesystem::path& path, const std::filesystem::path& out_dir) {
            const RunOutcome out = run_scenario(path, out_dir);
            return py::make_tuple(out.exit_code, out.files);
        },
        py::arg("path"), py::arg("out_dir"));
}
