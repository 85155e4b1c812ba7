#include "cgtc/ship_dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "cgtc/error.hpp"
#include "cgtc/geometry.hpp"

namespace cgtc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::ValidationError, what);
}

}  // namespace

void ShipParams::validate() const {
    require(length_m > 0.0, "length_m must be positive");
    require(rudder_limit_port_deg < 0.0 && rudder_limit_stbd_deg > 0.0,
            "rudder limits must satisfy port < 0 < starboard");
    require(steady_speed_mps > 0.0, "steady_speed_mps must be positive");
    require(rudder_rate_degps > 0.0, "rudder_rate_degps must be positive");
    require(turn_gain > 0.0, "turn_gain must be positive");
    require(turn_lag_s > 0.0, "turn_lag_s must be positive");
    require(speed_recovery_s > 0.0, "speed_recovery_s must be positive");
    require(asymmetry_factor >= 1.0, "asymmetry_factor must be >= 1");
    require(kick_gain >= 0.0, "kick_gain must be >= 0");
    require(speed_loss_gain >= 0.0 && speed_loss_gain < 1.0, "speed_loss_gain must be in [0, 1)");
}

double ShipParams::clamp_rudder(double rudder_deg) const {
    return std::clamp(rudder_deg, rudder_limit_port_deg, rudder_limit_stbd_deg);
}

ShipState trimmed_state(const ShipParams& params, double heading_deg) {
    ShipState s;
    s.heading_deg = normalize_deg(heading_deg);
    s.u_mps = trim_steady_speed(params);
    return s;
}

ShipState step(const ShipState& state, const ShipParams& params, double rudder_command_deg, double dt,
               bool& clamped) {
    if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "dt must be positive, got " + std::to_string(dt));

    const double command = params.clamp_rudder(rudder_command_deg);
    clamped = command != rudder_command_deg;

    const double max_rate = params.rudder_rate_degps;
    const double rudder_rate = std::clamp((command - state.rudder_deg) / dt, -max_rate, max_rate);

    const double delta = state.rudder_deg;
    const double side_gain = delta < 0.0 ? params.turn_gain / params.asymmetry_factor : params.turn_gain;
    const double yaw_target = side_gain * delta;
    const double yaw_accel = (yaw_target - state.yaw_rate_degps) / params.turn_lag_s;

    const double u0 = params.steady_speed_mps;
    const double u_target = u0 * (1.0 - params.speed_loss_gain * std::abs(delta) / params.rudder_limit_stbd_deg);
    const double u_dot = (u_target - state.u_mps) / params.speed_recovery_s;

    // Rudder motion pushes the stern out, so sway starts against the turn.
    const double v_dot = -state.v_mps / params.turn_lag_s - params.kick_gain * state.u_mps * deg2rad(rudder_rate);

    const double psi = deg2rad(state.heading_deg);
    const double x_dot = state.u_mps * std::sin(psi) + state.v_mps * std::cos(psi);
    const double y_dot = state.u_mps * std::cos(psi) - state.v_mps * std::sin(psi);

    ShipState next;
    next.x_m = state.x_m + x_dot * dt;
    next.y_m = state.y_m + y_dot * dt;
    next.heading_deg = normalize_deg(state.heading_deg + state.yaw_rate_degps * dt);
    next.u_mps = state.u_mps + u_dot * dt;
    next.v_mps = state.v_mps + v_dot * dt;
    next.yaw_rate_degps = state.yaw_rate_degps + yaw_accel * dt;
    next.rudder_deg = params.clamp_rudder(state.rudder_deg + rudder_rate * dt);
    // Land exactly on the command once the rate limit no longer binds.
    if (std::abs(command - state.rudder_deg) <= max_rate * dt) next.rudder_deg = command;
    return next;
}

ShipState step(const ShipState& state, const ShipParams& params, double rudder_command_deg, double dt) {
    bool clamped = false;
    return step(state, params, rudder_command_deg, dt, clamped);
}

std::vector<ShipState> simulate_turn(const ShipParams& params, double rudder_deg, double duration_s, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::NonPositiveDt, "dt must be positive, got " + std::to_string(dt));
    const auto n = static_cast<std::size_t>(std::max(0.0, std::ceil(duration_s / dt - 1e-9)));
    std::vector<ShipState> out;
    out.reserve(n + 1);
    out.push_back(trimmed_state(params));
    for (std::size_t i = 0; i < n; ++i) out.push_back(step(out.back(), params, rudder_deg, dt));
    return out;
}

double trim_steady_speed(const ShipParams& params) { return params.steady_speed_mps; }

CircleFit fit_circle(std::span<const ShipState> samples) {
    if (samples.size() < 3) throw Error(ErrorCode::InsufficientSamples, "circle fit needs at least 3 points");
    // x^2 + y^2 = 2 a x + 2 b y + c, solved around the centroid for conditioning.
    double mx = 0.0, my = 0.0;
    for (const auto& s : samples) {
        mx += s.x_m;
        my += s.y_m;
    }
    mx /= static_cast<double>(samples.size());
    my /= static_cast<double>(samples.size());

    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = samples[static_cast<std::size_t>(i)].x_m - mx;
        const double y = samples[static_cast<std::size_t>(i)].y_m - my;
        a(i, 0) = 2.0 * x;
        a(i, 1) = 2.0 * y;
        a(i, 2) = 1.0;
        b(i) = x * x + y * y;
    }
    const Eigen::Vector3d sol = a.householderQr().solve(b);
    CircleFit fit;
    fit.center_x_m = sol(0) + mx;
    fit.center_y_m = sol(1) + my;
    fit.radius_m = std::sqrt(sol(2) + sol(0) * sol(0) + sol(1) * sol(1));
    return fit;
}

double min_cross_track(std::span<const ShipState> samples) {
    if (samples.empty()) return 0.0;
    const ShipState& s0 = samples.front();
    const double psi = deg2rad(s0.heading_deg);
    const double sx = std::cos(psi), sy = -std::sin(psi);
    double lowest = 0.0;
    for (const auto& s : samples) lowest = std::min(lowest, (s.x_m - s0.x_m) * sx + (s.y_m - s0.y_m) * sy);
    return lowest;
}

}  // namespace cgtc
