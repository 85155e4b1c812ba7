#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cgtc/dynamic_avoidance.hpp"
#include "cgtc/error.hpp"
#include "cgtc/scenario.hpp"
#include "support.hpp"

using namespace cgtc;

namespace {

GridNode pose(double x, double y, double heading) {
    GridNode n;
    n.position = {x, y};
    n.heading = CompassAngle(heading);
    return n;
}

// Own vessel (0,0) heading north at 10 m/s; crossing vessel from the west; R + R_o = 1500.
Encounter crossing(double obstacle_speed) {
    const Obstacle o{{-2000, 2000}, 900, obstacle_speed, CompassAngle(90)};
    return make_encounter(pose(0, 0, 0), 10.0, o, 600.0);
}

// Closest approach of two constant-velocity points, sampled every `dt` over `horizon`.
double sampled_min_distance(Vec2 p, Vec2 vp, Vec2 q, Vec2 vq, double horizon, double dt) {
    double best = 1e18;
    for (double t = 0.0; t <= horizon; t += dt) best = std::min(best, distance(p + vp * t, q + vq * t));
    return best;
}

std::vector<Encounter> random_must_steer(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Encounter> out;
    while (static_cast<int>(out.size()) < count) {
        const double own_speed = 5.0 + 5.0 * u(rng);
        const double m_dist = 4000.0 + 6000.0 * u(rng);
        const double course = 30.0 + 120.0 * u(rng);  // crossing from port, varied angle
        const double om = 4000.0 + 6000.0 * u(rng);
        const Vec2 m{0.0, m_dist};
        const Vec2 start = m - CompassAngle(course).unit() * om;
        Obstacle o{start, 600.0 + 600.0 * u(rng), 1.0, CompassAngle(course)};
        Encounter probe = make_encounter(pose(0, 0, 0), own_speed, o, 600.0);
        const Classification c = classify_encounter(probe);
        if (c.degenerate || !std::isfinite(c.v_hi_mps)) continue;
        o.speed_mps = c.v_lo_mps + (c.v_hi_mps - c.v_lo_mps) * (0.1 + 0.8 * u(rng));
        Encounter enc = make_encounter(pose(0, 0, 0), own_speed, o, 600.0);
        if (classify_encounter(enc).kind != EncounterClass::MustSteer) continue;
        try {
            if (!virtual_obstacle_radius(enc).constraint_active) continue;
        } catch (const Error&) {
            continue;
        }
        out.push_back(enc);
    }
    return out;
}

}  // namespace

TEST(HeadingIntersection, PerpendicularCrossing) {
    const Vec2 m = heading_intersection(pose(0, 0, 0), Obstacle{{-2000, 2000}, 900, 5, CompassAngle(90)});
    EXPECT_NEAR(m.x, 0.0, 1e-9);
    EXPECT_NEAR(m.y, 2000.0, 1e-9);
}

TEST(HeadingIntersection, ParallelAndDiverging) {
    auto code = [](const Obstacle& o) {
        try {
            heading_intersection(pose(0, 0, 0), o);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ValidationError;
    };
    EXPECT_EQ(code({{-2000, 2000}, 900, 5, CompassAngle(0)}), ErrorCode::ParallelCourses);
    EXPECT_EQ(code({{-2000, 2000}, 900, 5, CompassAngle(270)}), ErrorCode::NoForwardIntersection);
    EXPECT_EQ(code({{-2000, -3000}, 900, 5, CompassAngle(45)}), ErrorCode::NoForwardIntersection);
}

TEST(HeadingIntersection, SatisfiesBothRays) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> pos(-5000, 5000), ang(0, 360);
    int checked = 0;
    while (checked < 200) {
        const GridNode own = pose(pos(rng), pos(rng), ang(rng));
        const Obstacle o{{pos(rng), pos(rng)}, 500, 5, CompassAngle(ang(rng))};
        Vec2 m;
        try {
            m = heading_intersection(own, o);
        } catch (const Error&) {
            continue;
        }
        const double s = (m - own.position).dot(own.heading.unit());
        const double t = (m - o.center).dot(o.course.unit());
        EXPECT_GE(s, 0.0);
        EXPECT_GE(t, 0.0);
        EXPECT_LT(distance(own.position + own.heading.unit() * s, m), 1e-6);
        EXPECT_LT(distance(o.center + o.course.unit() * t, m), 1e-6);
        ++checked;
    }
}

TEST(Classify, SpeedBounds) {
    const Classification slow = classify_encounter(crossing(2.0));
    EXPECT_NEAR(slow.v_lo_mps, 2.5, 1e-9);
    EXPECT_NEAR(slow.v_hi_mps, 40.0, 1e-9);
    EXPECT_EQ(slow.kind, EncounterClass::MaintainOwnFirst);
    EXPECT_EQ(classify_encounter(crossing(50.0)).kind, EncounterClass::MaintainObstacleFirst);
    EXPECT_EQ(classify_encounter(crossing(10.0)).kind, EncounterClass::MustSteer);
    EXPECT_FALSE(slow.degenerate);
}

TEST(Classify, DegenerateGeometryMustSteer) {
    const Obstacle close{{-1000, 1200}, 900, 5, CompassAngle(90)};
    const Classification c = classify_encounter(make_encounter(pose(0, 0, 0), 10.0, close, 600.0));
    EXPECT_TRUE(c.degenerate);
    EXPECT_EQ(c.kind, EncounterClass::MustSteer);
}

TEST(Classify, MaintainClassesKeepSeparation) {
    // With no steering the constant-velocity tracks must stay R + R_o apart.
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double dt = 0.5;
    int checked = 0;
    while (checked < 100) {
        const double vs = 5.0 + 5.0 * u(rng);
        const Vec2 m{0.0, 3000.0 + 6000.0 * u(rng)};
        const CompassAngle course(30.0 + 120.0 * u(rng));
        Obstacle o{m - course.unit() * (3000.0 + 6000.0 * u(rng)), 900.0, 1.0, course};
        const Classification c = classify_encounter(make_encounter(pose(0, 0, 0), vs, o, 600.0));
        if (c.degenerate || !std::isfinite(c.v_hi_mps)) continue;
        const bool own_first = u(rng) < 0.5;
        o.speed_mps = own_first ? c.v_lo_mps * u(rng) : c.v_hi_mps * (1.0 + u(rng));
        const double horizon = 2.0 * m.y / vs;
        const double sep =
            sampled_min_distance({0, 0}, CompassAngle(0).unit() * vs, o.center, o.course.unit() * o.speed_mps, horizon, dt);
        const double slack = dt * (vs + o.speed_mps);
        EXPECT_GE(sep, 1500.0 - slack) << (own_first ? "own first" : "obstacle first") << " at V_o " << o.speed_mps;
        ++checked;
    }
}

TEST(VirtualObstacle, PassGeometry) {
    const Encounter enc = crossing(10.0);
    const VirtualObstacle vo = virtual_obstacle_radius(enc);
    const VirtualPass p = virtual_pass(enc, vo.radius_m);
    const double cm = distance(enc.own_pose.position, enc.meeting_point);
    const double expect_ls2 = cm * cm - vo.radius_m * vo.radius_m + enc.R_m * enc.R_m;
    EXPECT_NEAR(p.l_s_m * p.l_s_m, expect_ls2, 1e-6 * expect_ls2);
    // C_x is one own-domain radius off the tangent point, so its domain touches the virtual disc.
    EXPECT_NEAR(distance(p.own_at_pass, enc.meeting_point), vo.radius_m + enc.R_m, 1e-6);
    EXPECT_NEAR(distance(p.own_at_pass, enc.own_pose.position), p.l_s_m, 1e-6);
    // The pass goes to starboard of M for a crossing from port.
    EXPECT_GT(p.own_at_pass.x, 0.0);
    EXPECT_NEAR(p.t_s, p.l_s_m / enc.own_speed_mps, 1e-9);
    EXPECT_NEAR(distance(p.obstacle_at_pass, enc.obstacle.center), enc.obstacle.speed_mps * p.t_s, 1e-6);
}

TEST(VirtualObstacle, ActiveAndMatchesDenseScan) {
    for (const Encounter& enc : random_must_steer(20, 2024)) {
        const VirtualObstacle vo = virtual_obstacle_radius(enc);
        EXPECT_LT(std::abs(virtual_separation_margin(enc, vo.radius_m)), 1.0);
        const double cm = distance(enc.own_pose.position, enc.meeting_point);
        double scan = -1.0;
        for (double rx = 1.0; rx < cm; rx += 1.0) {
            if (virtual_separation_margin(enc, rx) >= 0.0) {
                scan = rx;
                break;
            }
        }
        ASSERT_GT(scan, 0.0);
        EXPECT_NEAR(vo.radius_m, scan, 2.0);
    }
}

TEST(VirtualObstacle, RadiusGrowsWithObstacleSpeed) {
    const Classification c = classify_encounter(crossing(10.0));
    double previous = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double vo = c.v_lo_mps + (c.v_hi_mps - c.v_lo_mps) * k / 6.0;
        Encounter enc = crossing(vo);
        ASSERT_EQ(classify_encounter(enc).kind, EncounterClass::MustSteer);
        double rx = 0.0;
        try {
            rx = virtual_obstacle_radius(enc).radius_m;
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::NoFeasibleRadius);
            break;
        }
        EXPECT_GE(rx, previous) << "V_o " << vo;
        previous = rx;
    }
}

TEST(Separation, StationaryPoints) {
    const std::vector<ShipState> own(10, ShipState{0, 0});
    const std::vector<Vec2> other(10, Vec2{60, 80});
    const SeparationSeries s = min_separation(own, other);
    EXPECT_EQ(s.minimum_m, 100.0);
    for (double d : s.distance_m) EXPECT_EQ(d, 100.0);
    const std::vector<Vec2> shorter(9, Vec2{60, 80});
    EXPECT_THROW(min_separation(own, shorter), Error);
}

TEST(Separation, PerpendicularCrossingMatchesClosedForm) {
    const double dt = 0.5, vs = 8.0, vo = 6.0;
    std::vector<ShipState> own;
    std::vector<Vec2> other;
    for (int i = 0; i <= 2000; ++i) {
        const double t = i * dt;
        own.push_back(ShipState{0.0, vs * t});
        other.push_back(Vec2{-3000.0 + vo * t, 3500.0});
    }
    // Relative position p0 + v t, minimum |p0 x v| / |v|.
    const Vec2 p0{3000.0, -3500.0}, v{-vo, vs};
    const double cpa = std::abs(p0.cross(v)) / v.norm();
    EXPECT_NEAR(min_separation(own, other).minimum_m, cpa, dt * v.norm());
}

TEST(PlanDynamic, SituationsStaySeparated) {
    for (const char* name : {"dynamic_situation1.json", "dynamic_situation2.json", "dynamic_situation3.json"}) {
        const Scenario s = load_scenario(test::scenario_path(name));
        const PlanResult plan = plan_dynamic(s);
        EXPECT_TRUE(plan.reached) << name;
        EXPECT_GT(plan.min_separation_m, 1500.0) << name;
        ASSERT_EQ(plan.separation_m.size(), plan.trajectory.size());
        // The real obstacle disc is never entered at any common timestamp.
        for (double d : plan.separation_m) EXPECT_GT(d, s.obstacles[0].radius_m);
    }
}

TEST(PlanDynamic, SeparationSeriesMatchesTracks) {
    const Scenario s = load_scenario(test::scenario_path("dynamic_situation3.json"));
    const PlanResult plan = plan_dynamic(s);
    ASSERT_EQ(plan.obstacle_track.size(), plan.trajectory.size());
    for (std::size_t i = 0; i < plan.trajectory.size(); i += 25) {
        const Vec2 expect = s.obstacles[0].position_at(plan.times_s[i]);
        EXPECT_NEAR(distance(plan.obstacle_track[i], expect), 0.0, 1e-6);
    }
    const SeparationSeries series = min_separation(plan.trajectory, plan.obstacle_track);
    EXPECT_NEAR(series.minimum_m, plan.min_separation_m, 1e-9);
}

TEST(PlanDynamic, RejectsSeveralMovers) {
    Scenario s = load_scenario(test::scenario_path("dynamic_situation3.json"));
    s.obstacles.push_back(Obstacle{{-6000, 8000}, 900, 5.0, CompassAngle(90)});
    EXPECT_THROW(plan_dynamic(s), Error);
}
