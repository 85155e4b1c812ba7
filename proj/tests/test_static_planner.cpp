#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cgtc/error.hpp"
#include "cgtc/static_planner.hpp"

using namespace cgtc;

namespace {

const ShipParams kShip;

const CellSet& default_set() {
    static const CellSet set = build_cell_set(kShip, ship_domain_radius(kShip, 6.0), 5.0);
    return set;
}

GridNode pose(double x, double y, double heading) {
    GridNode n;
    n.position = {x, y};
    n.heading = CompassAngle(heading);
    return n;
}

Scenario scene(PlanMode mode, Vec2 destination, std::vector<Obstacle> obstacles = {}) {
    Scenario s;
    s.name = "test";
    s.mode = mode;
    s.start = {{0.0, 0.0}, CompassAngle(0.0)};
    s.destination = destination;
    s.obstacles = std::move(obstacles);
    s.domain_factor = 6.0;
    return s;
}

// Tangent bearings from the definition: the extreme bearings of the disc seen from c.
std::pair<double, double> tangents_oracle(Vec2 c, Vec2 o, double r) {
    const double centre = std::atan2(o.x - c.x, o.y - c.y) * 180.0 / kPi;
    const double half = std::asin(r / distance(c, o)) * 180.0 / kPi;
    return {normalize_deg(centre - half), normalize_deg(centre + half)};
}

double line_distance(Vec2 p, Vec2 origin, CompassAngle bearing) {
    return std::abs(bearing.unit().cross(p - origin));
}

}  // namespace

TEST(Tangents, Examples) {
    auto [l, r] = tangent_angles({0, 0}, Obstacle{{0, 1000}, 500});
    EXPECT_NEAR(l.degrees(), 330.0, 1e-9);
    EXPECT_NEAR(r.degrees(), 30.0, 1e-9);
    std::tie(l, r) = tangent_angles({0, 0}, Obstacle{{1000, 0}, 500});
    EXPECT_NEAR(l.degrees(), 60.0, 1e-9);
    EXPECT_NEAR(r.degrees(), 120.0, 1e-9);
}

TEST(Tangents, BruteForceScan) {
    // Bearings of boundary points at 0.01 deg steps around the disc; the extremes are the tangents.
    const Vec2 c{0, 0}, o{800, 600};
    const double r = 250;
    const double centre = compass_bearing(c, o).degrees();
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 36000; ++i) {
        const Vec2 p = polar_to_world(o, r, CompassAngle(0.01 * i));
        const double off = wrap_signed_deg(compass_bearing(c, p).degrees() - centre);
        lo = std::min(lo, off);
        hi = std::max(hi, off);
    }
    const auto [l, rr] = tangent_angles(c, Obstacle{o, r});
    EXPECT_NEAR(wrap_signed_deg(l.degrees() - centre), lo, 0.02);
    EXPECT_NEAR(wrap_signed_deg(rr.degrees() - centre), hi, 0.02);
}

TEST(Tangents, InsideObstacle) {
    for (double y : {100.0, 500.0}) {
        try {
            tangent_angles({0, 0}, Obstacle{{0, y}, 500});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InsideObstacle);
        }
    }
}

TEST(SelectHeading, FreeWater) {
    const CellSet& set = default_set();
    HeadingDecision d = select_heading_free(pose(0, 0, 0), {0, 5000}, set);
    EXPECT_NEAR(d.heading_change_deg, 0.0, 1e-9);
    EXPECT_FALSE(d.two_step);

    const Vec2 bearing37 = polar_to_world({0, 0}, 4000, CompassAngle(37));
    d = select_heading_free(pose(0, 0, 0), bearing37, set);
    EXPECT_NEAR(d.heading_change_deg, 37.0, 1e-9);
    EXPECT_FALSE(d.two_step);

    const Vec2 bearing135 = polar_to_world({0, 0}, 4000, CompassAngle(135));
    d = select_heading_free(pose(0, 0, 0), bearing135, set);
    EXPECT_NEAR(d.heading_change_deg, 90.0, 1e-9);
    EXPECT_TRUE(d.two_step);
    EXPECT_NEAR(d.target_bearing.degrees(), 135.0, 1e-9);

    const Vec2 bearing250 = polar_to_world({0, 0}, 4000, CompassAngle(250));
    d = select_heading_free(pose(0, 0, 0), bearing250, set);
    EXPECT_NEAR(d.heading_change_deg, -90.0, 1e-9);
    EXPECT_TRUE(d.two_step);
}

TEST(SelectHeading, NoObstaclesReducesToFree) {
    const CellSet& set = default_set();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> pos(-4000, 4000), ang(0, 360);
    for (int i = 0; i < 50; ++i) {
        const GridNode p = pose(pos(rng), pos(rng), ang(rng));
        const Vec2 dest{pos(rng), pos(rng)};
        const HeadingDecision a = select_heading_free(p, dest, set);
        const HeadingDecision b = select_heading_static(p, dest, {}, set);
        EXPECT_EQ(a.heading_change_deg, b.heading_change_deg);
        EXPECT_EQ(a.two_step, b.two_step);
        EXPECT_EQ(a.target_bearing, b.target_bearing);
    }
}

TEST(SelectHeading, SymmetricTieGoesStarboard) {
    const std::vector<Obstacle> obs{{{0, 2000}, 500}};
    const HeadingDecision d = select_heading_static(pose(0, 0, 0), {0, 4000}, obs, default_set());
    const double expect = std::asin(500.0 / 2000.0) * 180.0 / kPi;
    EXPECT_NEAR(d.target_bearing.degrees(), expect, 1e-9);
    EXPECT_NEAR(d.heading_change_deg, expect, 1e-9);
    EXPECT_EQ(d.focused_obstacle, std::optional<std::size_t>(0));
}

TEST(SelectHeading, ExtremeTangentsOfBlockingGroup) {
    // Three overlapping discs across the destination line; the right side is narrower.
    const std::vector<Obstacle> obs{{{-200, 2500}, 600}, {{400, 3600}, 500}, {{-900, 4200}, 500}};
    const Vec2 c{0, 0}, dest{0, 10000};
    double m = 1e9, n = -1e9;
    for (const auto& o : obs) {
        const auto [l, r] = tangents_oracle(c, o.center, o.radius_m);
        m = std::min(m, wrap_signed_deg(l));
        n = std::max(n, wrap_signed_deg(r));
    }
    ASSERT_LT(m, 0.0);
    ASSERT_GT(n, 0.0);
    const double expect = std::abs(n) <= std::abs(m) ? n : m;
    const HeadingDecision d = select_heading_static(pose(0, 0, 0), dest, obs, default_set());
    EXPECT_NEAR(wrap_signed_deg(d.target_bearing.degrees()), expect, 1e-9);
    EXPECT_GT(expect, 0.0);
}

TEST(SelectHeading, InsideObstacleIsReported) {
    const std::vector<Obstacle> obs{{{0, 100}, 500}};
    EXPECT_THROW(select_heading_static(pose(0, 0, 0), {0, 4000}, obs, default_set()), Error);
}

TEST(Bypass, AsternAndAhead) {
    const Obstacle o{{0, 2000}, 500};
    EXPECT_FALSE(is_bypassed(pose(0, 0, 0), o, {0, 5000}));
    EXPECT_TRUE(is_bypassed(pose(0, 3000, 0), o, {0, 5000}));
    EXPECT_TRUE(is_bypassed(pose(0, 0, 0), Obstacle{{0, -2000}, 500}, {0, -5000}));
    EXPECT_TRUE(blocks_destination({0, 0}, o, {0, 5000}));
    EXPECT_FALSE(blocks_destination({0, 0}, o, {5000, 0}));
}

TEST(PlanStatic, StraightFreeWater) {
    const CellSet& set = default_set();
    const PlanResult plan = plan_static(scene(PlanMode::Free, {0, 10 * set.radius_m}), set);
    EXPECT_TRUE(plan.reached);
    EXPECT_EQ(plan.steering_count, 0);
    EXPECT_EQ(plan.steps.size(), 10u);
    for (const auto& s : plan.trajectory) EXPECT_NEAR(s.x_m, 0.0, 1e-9);
    EXPECT_NEAR(plan.path_length_m, 10 * set.radius_m, 1e-6);
}

TEST(PlanStatic, EmptyStaticEqualsFree) {
    const CellSet& set = default_set();
    const Vec2 dest = polar_to_world({0, 0}, 5000, CompassAngle(120));
    const PlanResult a = plan_static(scene(PlanMode::Free, dest), set);
    const PlanResult b = plan_static(scene(PlanMode::Static, dest), set);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    EXPECT_EQ(a.rudder_commands, b.rudder_commands);
    EXPECT_EQ(a.trajectory, b.trajectory);
}

TEST(PlanStatic, ClearsEveryObstacle) {
    const std::vector<Obstacle> obs{{{100, 2600}, 700}, {{1900, 4800}, 800}, {{-300, 6200}, 650},
                                    {{1300, 8400}, 700}};
    const PlanResult plan = plan_static(scene(PlanMode::Static, {1500, 11000}, obs), default_set());
    EXPECT_TRUE(plan.reached);
    for (const auto& s : plan.trajectory) {
        for (const auto& o : obs) EXPECT_GT(distance({s.x_m, s.y_m}, o.center), o.radius_m);
    }
    EXPECT_GT(plan.min_clearance_m, 0.0);
}

TEST(PlanStatic, TangentTrackingConverges) {
    const std::vector<Obstacle> obs{{{150, 3000}, 900}};
    const PlanResult plan = plan_static(scene(PlanMode::Static, {0, 8000}, obs), default_set());
    ASSERT_TRUE(plan.reached);
    std::vector<double> gaps;
    for (const auto& st : plan.steps) {
        if (!st.focused_obstacle) break;
        const Vec2 from = plan.nodes[st.node_index].position;
        const Vec2 next = plan.nodes[st.node_index + 1].position;
        gaps.push_back(line_distance(next, from, st.decided_bearing));
    }
    ASSERT_GE(gaps.size(), 3u);
    // Cells meet their heading change to 1e-4 deg, which leaves sub-millimetre offsets.
    const double noise = 1e-3;
    for (std::size_t k = 2; k < gaps.size(); ++k) EXPECT_LE(gaps[k], gaps[k - 1] + noise) << "step " << k;
}

TEST(PlanStatic, MirrorSymmetry) {
    ShipParams ship;
    ship.asymmetry_factor = 1.0;
    ship.kick_gain = 0.0;
    Scenario right = scene(PlanMode::Static, {400, 9000}, {{{350, 3500}, 800}});
    Scenario left = scene(PlanMode::Static, {-400, 9000}, {{{-350, 3500}, 800}});
    right.ship = left.ship = ship;
    const PlanResult a = plan_static(right);
    const PlanResult b = plan_static(left);
    ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        EXPECT_NEAR(a.trajectory[i].x_m, -b.trajectory[i].x_m, 1e-3);
        EXPECT_NEAR(a.trajectory[i].y_m, b.trajectory[i].y_m, 1e-3);
    }
    for (std::size_t i = 0; i < a.rudder_commands.size(); ++i) {
        EXPECT_NEAR(a.rudder_commands[i], -b.rudder_commands[i], 1e-3);
    }
}

TEST(PlanStatic, RejectsEndpointsInsideObstacles) {
    auto code = [](const Scenario& s) {
        try {
            plan_static(s, default_set());
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ValidationError;
    };
    EXPECT_EQ(code(scene(PlanMode::Static, {0, 5000}, {{{0, 100}, 300}})), ErrorCode::StartInsideObstacle);
    EXPECT_EQ(code(scene(PlanMode::Static, {0, 5000}, {{{0, 5100}, 300}})), ErrorCode::DestinationInsideObstacle);
}

TEST(PlanStatic, StepBudgetEndsUnreached) {
    Scenario s = scene(PlanMode::Free, {0, 20000});
    s.sim.max_steps = 3;
    const PlanResult plan = plan_static(s, default_set());
    EXPECT_FALSE(plan.reached);
    EXPECT_EQ(plan.steps.size(), 3u);
}

TEST(Metrics, CountsAndLengths) {
    const std::vector<double> cmds{12.0, 0.9, -1.0, -0.2, 1.0};
    EXPECT_EQ(count_steering(cmds), 3);
    const std::vector<ShipState> track{{0, 0}, {3, 4}, {3, 10}};
    EXPECT_NEAR(path_length(track), 11.0, 1e-12);
    const std::vector<Obstacle> obs{{{0, 20}, 5}};
    EXPECT_NEAR(min_clearance(track, obs), std::hypot(3.0, 10.0) - 5.0, 1e-12);
}
