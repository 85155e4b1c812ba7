#include "cgtc/dynamic_avoidance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cgtc/error.hpp"
#include "planning_engine.hpp"

namespace cgtc {

Vec2 heading_intersection(const GridNode& own, const Obstacle& obstacle) {
    const Vec2 eh = own.heading.unit();
    const Vec2 eo = obstacle.course.unit();
    const double denom = eh.cross(eo);
    if (std::abs(denom) < 1e-12) throw Error(ErrorCode::ParallelCourses, "own heading and obstacle course are parallel");
    const Vec2 w = obstacle.center - own.position;
    const double s = w.cross(eo) / denom;
    const double t = w.cross(eh) / denom;
    if (!(s > 0.0) || !(t > 0.0)) {
        throw Error(ErrorCode::NoForwardIntersection, "tracks do not meet ahead of both vessels");
    }
    return own.position + eh * s;
}

Encounter make_encounter(const GridNode& own, double own_speed_mps, const Obstacle& obstacle, double own_radius_m) {
    if (!(own_speed_mps > 0.0)) throw Error(ErrorCode::ValidationError, "own speed must be positive");
    Encounter enc;
    enc.own_pose = own;
    enc.own_speed_mps = own_speed_mps;
    enc.obstacle = obstacle;
    enc.meeting_point = heading_intersection(own, obstacle);
    enc.l_s_m = distance(own.position, enc.meeting_point);
    enc.t_s = enc.l_s_m / own_speed_mps;
    enc.l_o_m = obstacle.speed_mps * enc.t_s;
    enc.R_m = own_radius_m;
    enc.R_o_m = obstacle.radius_m;
    return enc;
}

const char* to_string(EncounterClass c) {
    switch (c) {
        case EncounterClass::MaintainOwnFirst: return "MaintainOwnFirst";
        case EncounterClass::MaintainObstacleFirst: return "MaintainObstacleFirst";
        case EncounterClass::MustSteer: return "MustSteer";
    }
    return "Unknown";
}

Classification classify_encounter(const Encounter& enc) {
    const double cm = distance(enc.own_pose.position, enc.meeting_point);
    const double om = distance(enc.obstacle.center, enc.meeting_point);
    const double domains = enc.R_m + enc.R_o_m;
    const double vs = enc.own_speed_mps;

    Classification c;
    c.v_lo_mps = vs * (om - domains) / cm;
    if (cm > domains) {
        c.v_hi_mps = vs * om / (cm - domains);
    } else {
        c.v_hi_mps = std::numeric_limits<double>::infinity();
        c.degenerate = true;
    }
    if (om <= domains) c.degenerate = true;

    const double vo = enc.obstacle.speed_mps;
    if (c.v_lo_mps > 0.0 && vo <= c.v_lo_mps) {
        c.kind = EncounterClass::MaintainOwnFirst;
    } else if (vo >= c.v_hi_mps) {
        c.kind = EncounterClass::MaintainObstacleFirst;
    } else {
        c.kind = EncounterClass::MustSteer;
    }
    return c;
}

VirtualPass virtual_pass(const Encounter& enc, double rx) {
    const Vec2 c = enc.own_pose.position;
    const double cm = distance(c, enc.meeting_point);
    const double r = enc.R_m;

    VirtualPass p;
    p.l_s_m = std::sqrt(cm * cm - rx * rx + r * r);
    const double bearing_deg = compass_bearing(c, enc.meeting_point).degrees() + rad2deg(std::asin(rx / cm)) +
                               rad2deg(std::asin(r / p.l_s_m));
    p.own_bearing = CompassAngle(bearing_deg);
    p.own_at_pass = polar_to_world(c, p.l_s_m, p.own_bearing);
    p.t_s = p.l_s_m / enc.own_speed_mps;
    p.l_o_m = enc.obstacle.speed_mps * p.t_s;
    p.obstacle_at_pass = polar_to_world(enc.obstacle.center, p.l_o_m, enc.obstacle.course);
    return p;
}

double virtual_separation_margin(const Encounter& enc, double rx) {
    const VirtualPass p = virtual_pass(enc, rx);
    return distance(p.own_at_pass, p.obstacle_at_pass) - (enc.R_m + enc.R_o_m);
}

VirtualObstacle virtual_obstacle_radius(const Encounter& enc) {
    const double cm = distance(enc.own_pose.position, enc.meeting_point);
    const double lo_bound = std::min(1.0, 0.01 * cm);
    const double hi_bound = cm * (1.0 - 1e-9);
    const int scan_steps = 1000;
    const double step = (hi_bound - lo_bound) / scan_steps;

    VirtualObstacle vo;
    vo.center = enc.meeting_point;
    if (virtual_separation_margin(enc, lo_bound) >= 0.0) {
        vo.radius_m = lo_bound;
        vo.constraint_active = false;
        return vo;
    }

    double infeasible = lo_bound;
    std::optional<double> feasible;
    for (int i = 1; i <= scan_steps; ++i) {
        const double rx = i == scan_steps ? hi_bound : lo_bound + step * i;
        if (virtual_separation_margin(enc, rx) >= 0.0) {
            feasible = rx;
            break;
        }
        infeasible = rx;
    }
    if (!feasible) {
        throw Error(ErrorCode::NoFeasibleRadius, "no virtual radius below |CM| = " + std::to_string(cm) +
                                                     " m separates the vessels");
    }
    double hi = *feasible;
    double lo = infeasible;
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (virtual_separation_margin(enc, mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    vo.radius_m = hi;
    return vo;
}

SeparationSeries min_separation(std::span<const ShipState> own_traj, std::span<const Vec2> obstacle_track) {
    if (own_traj.size() != obstacle_track.size()) {
        throw Error(ErrorCode::LengthMismatch, "own track has " + std::to_string(own_traj.size()) +
                                                   " samples, obstacle track " + std::to_string(obstacle_track.size()));
    }
    SeparationSeries out;
    out.distance_m.reserve(own_traj.size());
    out.minimum_m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < own_traj.size(); ++i) {
        const double d = distance({own_traj[i].x_m, own_traj[i].y_m}, obstacle_track[i]);
        out.distance_m.push_back(d);
        out.minimum_m = std::min(out.minimum_m, d);
    }
    return out;
}

PlanResult plan_dynamic(const Scenario& scenario) { return plan_dynamic(scenario, build_scenario_cells(scenario)); }

PlanResult plan_dynamic(const Scenario& scenario, const CellSet& cells) {
    scenario.validate();
    std::vector<Obstacle> statics;
    std::optional<Obstacle> mover;
    for (const auto& o : scenario.obstacles) {
        if (!o.moving()) {
            statics.push_back(o);
        } else if (mover) {
            throw Error(ErrorCode::ValidationError, "dynamic planning supports a single moving obstacle");
        } else {
            mover = o;
        }
    }
    if (!mover) return plan_static(scenario, cells);
    for (const auto& o : statics) {
        if (distance(scenario.start.position, o.center) <= o.radius_m) {
            throw Error(ErrorCode::StartInsideObstacle, "start pose lies inside an obstacle");
        }
        if (distance(scenario.destination, o.center) <= o.radius_m) {
            throw Error(ErrorCode::DestinationInsideObstacle, "destination lies inside an obstacle");
        }
    }

    const double own_radius = cells.radius_m;
    const double domains = own_radius + mover->radius_m;
    const double own_speed = trim_steady_speed(scenario.ship);

    detail::PlanEngine engine(scenario, cells);
    const detail::SafetyFn safety = [&](std::span<const ShipState> samples, std::span<const double> times) {
        detail::CandidateCheck check = detail::static_check(samples, statics);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double sep = distance({samples[i].x_m, samples[i].y_m}, mover->position_at(times[i])) - domains;
            check.margin = std::min(check.margin, sep);
        }
        // Hold the final heading until the destination would be reached and
        // take the closest approach on that leg, so a cell that only defers
        // the conflict past its own end is not judged safe.
        const ShipState& end = samples.back();
        const Vec2 own{end.x_m, end.y_m};
        const double horizon = distance(own, scenario.destination) / own_speed;
        const Vec2 rel = own - mover->position_at(times.back());
        const Vec2 rel_v = CompassAngle(end.heading_deg).unit() * own_speed - mover->course.unit() * mover->speed_mps;
        const double vv = rel_v.dot(rel_v);
        const double t_cpa = vv > 0.0 ? std::clamp(-rel.dot(rel_v) / vv, 0.0, horizon) : 0.0;
        check.margin = std::min(check.margin, (rel + rel_v * t_cpa).norm() - domains);
        return check;
    };

    std::optional<Obstacle> virtual_obstacle;
    auto done = [&](bool reached, std::string msg) {
        PlanResult r = engine.finish(statics, reached, std::move(msg));
        r.obstacle_track.reserve(r.times_s.size());
        for (double t : r.times_s) r.obstacle_track.push_back(mover->position_at(t));
        const SeparationSeries sep = min_separation(r.trajectory, r.obstacle_track);
        r.separation_m = sep.distance_m;
        r.min_separation_m = sep.minimum_m;
        return r;
    };

    for (int k = 0; k < scenario.sim.max_steps; ++k) {
        if (engine.at_destination()) return done(true, "destination reached");
        const GridNode& node = engine.current();

        if (virtual_obstacle && (distance(node.position, virtual_obstacle->center) <= virtual_obstacle->radius_m ||
                                 is_bypassed(node, *virtual_obstacle, scenario.destination))) {
            virtual_obstacle.reset();
        }

        bool turn_away = false;
        // The virtual obstacle stays in force until bypassed; re-deriving it
        // after every turn moves M and lets the conflict reappear.
        if (!virtual_obstacle) {
            Obstacle now = *mover;
            now.center = mover->position_at(engine.time());
            try {
                const Encounter enc = make_encounter(node, own_speed, now, own_radius);
                if (classify_encounter(enc).kind == EncounterClass::MustSteer) {
                    try {
                        virtual_obstacle = virtual_obstacle_radius(enc).as_obstacle();
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::NoFeasibleRadius) throw;
                        turn_away = true;
                    }
                }
            } catch (const Error& e) {
                // Diverging or parallel tracks carry no crossing risk.
                if (e.code() != ErrorCode::ParallelCourses && e.code() != ErrorCode::NoForwardIntersection) throw;
            }
        }

        HeadingDecision decision;
        PlanStep record;
        if (turn_away) {
            decision = detail::decide_bearing(node, node.heading + cells.max_heading_change_deg, cells);
        } else {
            std::vector<Obstacle> considered = statics;
            if (virtual_obstacle && distance(node.position, virtual_obstacle->center) > virtual_obstacle->radius_m) {
                considered.push_back(*virtual_obstacle);
            }
            const std::vector<Obstacle> steering = detail::steering_discs(considered, cells.radius_m);
            decision = select_heading_static(node, scenario.destination, steering, cells);
            const std::size_t virtual_index = statics.size();
            if (considered.size() > virtual_index && decision.focused_obstacle == virtual_index) {
                // The virtual disc is sized for a starboard passage.
                const CompassAngle right = tangent_angles(node.position, steering[virtual_index]).second;
                decision = detail::decide_bearing(node, right, cells);
                decision.focused_obstacle = virtual_index;
            }
        }
        record.virtual_obstacle = virtual_obstacle;
        if (!engine.advance(decision, safety, record)) {
            return done(false, "no admissible cell at step " + std::to_string(k));
        }
    }
    const bool reached = engine.at_destination();
    return done(reached, reached ? "destination reached" : "step budget exhausted");
}

}  // namespace cgtc
