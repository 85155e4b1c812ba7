#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cgtc/error.hpp"
#include "cgtc/io.hpp"
#include "cgtc/sim_harness.hpp"
#include "support.hpp"

using namespace cgtc;
namespace fs = std::filesystem;

namespace {

const ShipParams kShip;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("cgtc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario free_scene(Vec2 destination) {
    Scenario s;
    s.name = "free";
    s.mode = PlanMode::Free;
    s.destination = destination;
    s.domain_factor = 6.0;
    return s;
}

}  // namespace

TEST(OnlineGenerate, StraightFromTrim) {
    const auto track = online_generate(trimmed_state(kShip), kShip, 0.0, 50.0, 0.5);
    ASSERT_EQ(track.size(), 101u);
    EXPECT_NEAR(track.back().y_m, 7.7 * 50.0, 1e-9);
    for (const auto& s : track) EXPECT_EQ(s.heading_deg, 0.0);
}

TEST(OnlineGenerate, ChainingEqualsPiecewise) {
    ShipState start = trimmed_state(kShip, 30.0);
    start.x_m = 120.0;
    const auto a = online_generate(start, kShip, 20.0, 40.0, 0.5);
    const auto b = online_generate(a.back(), kShip, -10.0, 40.0, 0.5);
    const std::vector<RudderSegment> segs{{20.0, 40.0}, {-10.0, 40.0}};
    const auto both = online_generate(start, kShip, segs, 0.5);
    ASSERT_EQ(both.size(), a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(both[i], a[i]);
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_EQ(both[a.size() - 1 + i], b[i]);
}

TEST(OnlineGenerate, RotationEquivariance) {
    const auto base = online_generate(trimmed_state(kShip, 0.0), kShip, 15.0, 60.0, 0.5);
    for (double phi : {33.0, 145.0, 270.0}) {
        const auto rot = online_generate(trimmed_state(kShip, phi), kShip, 15.0, 60.0, 0.5);
        ASSERT_EQ(rot.size(), base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            const Vec2 expect = rotate_by_heading({base[i].x_m, base[i].y_m}, CompassAngle(phi));
            EXPECT_NEAR(rot[i].x_m, expect.x, 1e-6);
            EXPECT_NEAR(rot[i].y_m, expect.y, 1e-6);
            EXPECT_NEAR(wrap_signed_deg(rot[i].heading_deg - base[i].heading_deg - phi), 0.0, 1e-9);
        }
    }
}

TEST(OnlineGenerate, RejectsNonPositiveDt) {
    try {
        online_generate(trimmed_state(kShip), kShip, 0.0, 10.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonPositiveDt);
    }
}

TEST(GridBaseline, StraightMatchesCirclePlanner) {
    const Scenario s = free_scene({0, 4000});
    const ComparisonReport rep = compare_planners(s);
    ASSERT_TRUE(rep.circle.reached && rep.grid.reached);
    EXPECT_LE(std::abs(rep.circle.path_length_m - rep.grid.path_length_m), s.radius());
    ASSERT_TRUE(rep.length_ratio.has_value());
    EXPECT_NEAR(*rep.length_ratio, 1.0, 0.05);
    EXPECT_FALSE(rep.steering_ratio.has_value());  // neither planner steers
}

TEST(GridBaseline, OffAxisUsesTwoHeadings) {
    const Scenario s = free_scene(polar_to_world({0, 0}, 6000, CompassAngle(22.5)));
    const PlanResult grid = grid_baseline_plan(s);
    ASSERT_TRUE(grid.reached);
    std::set<long> headings;
    for (std::size_t i = 1; i < grid.nodes.size(); ++i) {
        headings.insert(std::lround(grid.nodes[i].heading.degrees() / 45.0) % 8);
    }
    EXPECT_GE(headings.size(), 2u);
    const PlanResult circle = plan_scenario(s);
    EXPECT_EQ(circle.steering_count, 1);
}

TEST(GridBaseline, EnclosedDestinationHasNoPath) {
    Scenario s = free_scene({0, 6000});
    s.mode = PlanMode::Static;
    for (int k = 0; k < 12; ++k) {
        s.obstacles.push_back(Obstacle{polar_to_world({0, 6000}, 1500, CompassAngle(30.0 * k)), 500});
    }
    try {
        grid_baseline_plan(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoGridPath);
    }
    const ComparisonReport rep = compare_planners(s);
    ASSERT_TRUE(rep.grid.error.has_value());
    EXPECT_NE(rep.grid.error->find("NoGridPath"), std::string::npos);
    EXPECT_FALSE(rep.length_ratio.has_value());
}

TEST(Compare, RejectsDynamicScenario) {
    const Scenario s = load_scenario(test::scenario_path("dynamic_situation1.json"));
    EXPECT_THROW(compare_planners(s), Error);
}

TEST(Compare, MetricsMatchWrittenFiles) {
    const fs::path dir = scratch("compare");
    const ComparisonReport rep = run_comparison(test::scenario_path("fig25_analog.json"), dir);
    const Scenario s = load_scenario(test::scenario_path("fig25_analog.json"));
    for (const auto& [prefix, m] : {std::pair{"circle", rep.circle}, std::pair{"grid", rep.grid}}) {
        const TrajectoryTable t = read_trajectory_csv(dir / (std::string(prefix) + "_trajectory.csv"));
        EXPECT_NEAR(path_length(t.states), m.path_length_m, 1e-3) << prefix;
        EXPECT_NEAR(min_clearance(t.states, s.obstacles), m.min_clearance_m, 1e-3) << prefix;

        std::istringstream cmds(slurp(dir / (std::string(prefix) + "_commands.csv")));
        std::string line;
        std::getline(cmds, line);
        std::vector<double> rudder;
        while (std::getline(cmds, line)) rudder.push_back(std::stod(line.substr(line.find(',') + 1)));
        EXPECT_EQ(count_steering(rudder), m.steering_count) << prefix;
    }
    EXPECT_TRUE(fs::exists(dir / "compare.json"));
}

TEST(RunScenario, WritesArtifactsAndIsDeterministic) {
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    const RunOutcome first = run_scenario(test::scenario_path("dynamic_situation3.json"), a);
    const RunOutcome second = run_scenario(test::scenario_path("dynamic_situation3.json"), b);
    EXPECT_EQ(first.exit_code, 0);
    EXPECT_TRUE(first.safe);
    for (const char* f : {"trajectory.csv", "commands.csv", "metrics.json", "separation.csv"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    const std::string metrics = slurp(a / "metrics.json");
    const auto pos = metrics.find("\"min_separation_m\": ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GT(std::stod(metrics.substr(pos + 20)), 1500.0);
    EXPECT_EQ(second.files.size(), first.files.size());
}

TEST(RunScenario, OverridesApply) {
    const fs::path dir = scratch("override");
    RunOverrides o;
    o.radius_m = 500.0;
    const RunOutcome out = run_scenario(test::scenario_path("free_straight.json"), dir, o);
    EXPECT_TRUE(out.plan.reached);
    EXPECT_NEAR(distance(out.plan.nodes[0].position, out.plan.nodes[1].position), 500.0, 2.5);
}

TEST(Scenario, MalformedFieldIsNamed) {
    const std::string bad = R"({"name": "x", "mode": "free", "start": {"x_m": 0, "y_m": "zero", "heading_deg": 0},
        "destination": {"x_m": 0, "y_m": 100}})";
    try {
        parse_scenario(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("start.y_m"), std::string::npos) << e.what();
    }
}

TEST(Scenario, UnknownFieldRejected) {
    const std::string bad = R"({"name": "x", "mode": "free", "start": {"x_m": 0, "y_m": 0, "heading_deg": 0},
        "destination": {"x_m": 0, "y_m": 1000}, "destinaton_tolerance": 5})";
    try {
        parse_scenario(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("destinaton_tolerance"), std::string::npos);
    }
}

TEST(Scenario, SyntaxErrorGivesLine) {
    try {
        parse_scenario("{\n\"name\": \"x\",\n\"mode\": free\n}");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Scenario, RoundTrip) {
    const Scenario s = load_scenario(test::scenario_path("dynamic_situation3.json"));
    const Scenario back = parse_scenario(dump_scenario(s));
    EXPECT_EQ(dump_scenario(back), dump_scenario(s));
    EXPECT_EQ(back.radius(), 600.0);
    EXPECT_EQ(back.obstacles.size(), 1u);
}

TEST(Scenario, Validation) {
    Scenario s = free_scene({0, 0});
    EXPECT_THROW(s.validate(), Error);
    s.destination = {0, 1000};
    s.sim.dt_s = 0.0;
    EXPECT_THROW(s.validate(), Error);
}

TEST(Io, RelationCsvReader) {
    const fs::path dir = scratch("relation");
    fs::create_directories(dir);
    write_text(dir / "ok.csv", "rudder_deg,heading_deg\n-10,-30\n0,0.5\n10,31\n");
    const auto rows = read_relation_csv(dir / "ok.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[2].heading_change_deg, 31.0);
    write_text(dir / "bad.csv", "rudder_deg,heading_deg\n-10,-30\n0,abc\n");
    try {
        read_relation_csv(dir / "bad.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
    }
}
