#include "cgtc/trajectory_cell.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgtc/error.hpp"

namespace cgtc {

namespace {

ShipState lerp(const ShipState& a, const ShipState& b, double f) {
    auto mix = [f](double p, double q) { return p + f * (q - p); };
    ShipState s;
    s.x_m = mix(a.x_m, b.x_m);
    s.y_m = mix(a.y_m, b.y_m);
    s.heading_deg = normalize_deg(a.heading_deg + f * wrap_signed_deg(b.heading_deg - a.heading_deg));
    s.u_mps = mix(a.u_mps, b.u_mps);
    s.v_mps = mix(a.v_mps, b.v_mps);
    s.yaw_rate_degps = mix(a.yaw_rate_degps, b.yaw_rate_degps);
    s.rudder_deg = mix(a.rudder_deg, b.rudder_deg);
    return s;
}

// Fraction f in [0, 1] along segment p -> q where |p + f (q - p)| = radius,
// given |p| < radius <= |q|.
double circle_crossing_fraction(Vec2 p, Vec2 q, double radius) {
    const Vec2 d = q - p;
    const double a = d.dot(d);
    const double b = 2.0 * p.dot(d);
    const double c = p.dot(p) - radius * radius;
    if (a == 0.0) return 1.0;
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double f = (-b + std::sqrt(disc)) / (2.0 * a);
    return std::clamp(f, 0.0, 1.0);
}

std::string fmt_deg(double v) { return std::to_string(v) + " deg"; }

}  // namespace

TrajectoryCell simulate_cell(const ShipParams& params, double delta0_deg, double radius_m,
                             const CellOptions& options) {
    params.validate();
    const double dt = options.dt_s;
    if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "cell dt must be positive");
    if (!(radius_m > 0.0)) throw Error(ErrorCode::ValidationError, "cell radius must be positive");

    const double delta0 = params.clamp_rudder(delta0_deg);
    const auto adjust_steps = static_cast<long>(std::llround(options.adjust_duration_s / dt));
    const auto max_steps = static_cast<long>(std::ceil(options.max_duration_s / dt));
    const double u0 = trim_steady_speed(params);

    TrajectoryCell cell;
    cell.delta0_deg = delta0;
    cell.radius_m = radius_m;

    ShipState s = trimmed_state(params);
    double heading_acc = 0.0;  // unwrapped heading change
    double arc = 0.0;
    cell.samples.push_back(s);
    cell.times_s.push_back(0.0);
    cell.commands_deg.push_back(adjust_steps > 0 ? delta0 : 0.0);

    for (long k = 0; k < max_steps; ++k) {
        const double command = (k < adjust_steps) ? delta0 : 0.0;
        const ShipState next = step(s, params, command, dt);
        const double dpsi = wrap_signed_deg(next.heading_deg - s.heading_deg);
        const Vec2 p{s.x_m, s.y_m};
        const Vec2 q{next.x_m, next.y_m};

        if (q.norm() >= radius_m) {
            const double f = circle_crossing_fraction(p, q, radius_m);
            ShipState end = lerp(s, next, f);
            const Vec2 e{end.x_m, end.y_m};
            // Snap onto the circle to remove rounding in the interpolation.
            const double scale = radius_m / e.norm();
            end.x_m *= scale;
            end.y_m *= scale;

            if (end.rudder_deg != 0.0 || command != 0.0 || std::abs(end.u_mps - u0) >= kSpeedTolerance * u0) {
                throw Error(ErrorCode::Unreachable,
                            "track reaches the circle of radius " + std::to_string(radius_m) +
                                " m before the maneuver with rudder " + fmt_deg(delta0) + " has stabilized");
            }
            cell.samples.push_back(end);
            cell.times_s.push_back((static_cast<double>(k) + f) * dt);
            cell.commands_deg.push_back(0.0);
            cell.heading_change_deg = heading_acc + f * dpsi;
            cell.end_offset = {end.x_m, end.y_m};
            cell.central_angle_deg = wrap_signed_deg(rad2deg(std::atan2(end.x_m, end.y_m)));
            cell.arc_length_m = arc + f * (q - p).norm();
            cell.duration_s = cell.times_s.back();
            return cell;
        }

        heading_acc += dpsi;
        arc += (q - p).norm();
        s = next;
        cell.samples.push_back(s);
        cell.times_s.push_back(static_cast<double>(k + 1) * dt);
        cell.commands_deg.push_back((k + 1 < adjust_steps) ? delta0 : 0.0);
    }
    throw Error(ErrorCode::Unreachable, "track never reaches the circle of radius " + std::to_string(radius_m) +
                                            " m within " + std::to_string(options.max_duration_s) + " s");
}

TrajectoryCell generate_cell(const ShipParams& params, double target_heading_change_deg, double radius_m,
                             const CellOptions& options) {
    params.validate();
    const double target = target_heading_change_deg;
    if (std::abs(target) > options.max_heading_change_deg + 1e-9) {
        throw Error(ErrorCode::Unreachable, "target heading change " + fmt_deg(target) + " exceeds the maximum " +
                                                fmt_deg(options.max_heading_change_deg));
    }
    if (radius_m < 2.0 * params.length_m) {
        throw Error(ErrorCode::ValidationError, "circle radius " + std::to_string(radius_m) +
                                                    " m is below two ship lengths");
    }
    if (target == 0.0) return simulate_cell(params, 0.0, radius_m, options);

    // Bracket on the side of the turn. Heading change is increasing in delta0.
    double lo = 0.0;
    double hi = target > 0.0 ? params.rudder_limit_stbd_deg : params.rudder_limit_port_deg;
    TrajectoryCell at_limit = simulate_cell(params, hi, radius_m, options);
    if (std::abs(at_limit.heading_change_deg) < std::abs(target) - options.heading_tolerance_deg) {
        throw Error(ErrorCode::Unreachable, "target heading change " + fmt_deg(target) +
                                                " needs more than the rudder limit (reaches " +
                                                fmt_deg(at_limit.heading_change_deg) + ")");
    }
    if (std::abs(at_limit.heading_change_deg) <= std::abs(target)) return at_limit;

    TrajectoryCell best = at_limit;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const double mid = 0.5 * (lo + hi);
        TrajectoryCell cell = simulate_cell(params, mid, radius_m, options);
        const double err = cell.heading_change_deg - target;
        if (std::abs(err) < std::abs(best.heading_change_deg - target)) best = cell;
        if (std::abs(err) < 1e-4 || std::abs(hi - lo) < 1e-9) break;
        // Same sign as target means overshoot: shrink the rudder.
        if ((err > 0.0) == (target > 0.0)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if (std::abs(best.heading_change_deg - target) > options.heading_tolerance_deg) {
        throw Error(ErrorCode::NonConvergence, "bisection for heading change " + fmt_deg(target) + " ended at " +
                                                   fmt_deg(best.heading_change_deg));
    }
    return best;
}

RuleReport validate_rules(const TrajectoryCell& cell, const ShipParams& params) {
    RuleReport r;
    if (cell.samples.empty()) return r;
    const double u0 = trim_steady_speed(params);
    const ShipState& first = cell.samples.front();
    const ShipState& last = cell.samples.back();

    r.max_end_rudder_deg = std::max(std::abs(first.rudder_deg), std::abs(last.rudder_deg));
    r.speed_slack = std::max(std::abs(first.u_mps - u0), std::abs(last.u_mps - u0)) / u0;
    r.rule1_stable_ends = r.max_end_rudder_deg == 0.0 && r.speed_slack < kSpeedTolerance;

    // A plateau is a maximal run of equal nonzero commands.
    const auto& cmd = cell.commands_deg;
    for (std::size_t i = 0; i < cmd.size(); ++i) {
        if (cmd[i] != 0.0 && (i == 0 || cmd[i - 1] != cmd[i])) ++r.steering_plateaus;
    }
    r.rule2_single_steering = r.steering_plateaus <= 1;

    const double d = std::hypot(last.x_m - first.x_m, last.y_m - first.y_m);
    r.distance_slack = cell.radius_m > 0.0 ? std::abs(d - cell.radius_m) / cell.radius_m : 1.0;
    r.rule3_on_circle = r.distance_slack < kRadiusTolerance;
    return r;
}

std::size_t CellSet::nearest(double heading_change_deg) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        if (std::abs(cells[i].heading_change_deg - heading_change_deg) <
            std::abs(cells[best].heading_change_deg - heading_change_deg)) {
            best = i;
        }
    }
    return best;
}

std::vector<RelationSample> CellSet::relation_samples() const {
    std::vector<RelationSample> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back({c.delta0_deg, c.heading_change_deg});
    return out;
}

CellSet build_cell_set(const ShipParams& params, double radius_m, double resolution_deg, const CellOptions& options) {
    const double span = 2.0 * options.max_heading_change_deg;
    const double count = span / resolution_deg;
    if (resolution_deg < 1.0 || resolution_deg > 15.0 || std::abs(count - std::round(count)) > 1e-9) {
        throw Error(ErrorCode::ValidationError, "resolution " + fmt_deg(resolution_deg) +
                                                    " must lie in [1, 15] and divide " + fmt_deg(span));
    }
    const auto n = static_cast<int>(std::llround(count));

    std::vector<TrajectoryCell> cells;
    cells.reserve(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        const double target = -options.max_heading_change_deg + resolution_deg * i;
        const double snapped = std::abs(target) < 1e-9 ? 0.0 : target;
        try {
            cells.push_back(generate_cell(params, snapped, radius_m, options));
        } catch (const Error& e) {
            throw Error(e.code(), "cell for heading change " + fmt_deg(snapped) + ": " + e.what());
        }
    }

    std::vector<RelationSample> samples;
    samples.reserve(cells.size());
    for (const auto& c : cells) samples.push_back({c.delta0_deg, c.heading_change_deg});

    return CellSet{radius_m, resolution_deg, options.max_heading_change_deg, std::move(cells),
                   fit_cubic_relation(samples), options};
}

std::vector<ShipState> place_cell(const TrajectoryCell& cell, Vec2 origin, CompassAngle heading) {
    std::vector<ShipState> out;
    out.reserve(cell.samples.size());
    for (const auto& s : cell.samples) {
        ShipState w = s;
        const Vec2 p = origin + rotate_by_heading({s.x_m, s.y_m}, heading);
        w.x_m = p.x;
        w.y_m = p.y;
        w.heading_deg = normalize_deg(s.heading_deg + heading.degrees());
        out.push_back(w);
    }
    return out;
}

}  // namespace cgtc
