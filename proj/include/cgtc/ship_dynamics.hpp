#pragma once

#include <span>
#include <vector>

namespace cgtc {

/// Hull, rudder and response parameters of the surrogate maneuvering model.
///
/// The model is a response-type reduction of the surge/sway/yaw force
/// decomposition: yaw rate follows the rudder through a first-order lag,
/// advance speed drops in proportion to rudder deflection, and rudder motion
/// induces a transient sway against the turn (the "kick"). Defaults describe
/// a 63.6 m vessel at 7.7 m/s that needs about -35 deg (port) and +31 deg
/// (starboard) of rudder for a 90 deg heading change in a standard cell.
struct ShipParams {
    double length_m = 63.6;
    double beam_m = 16.4;
    double draft_m = 6.22;
    double steady_speed_mps = 7.7;
    double rudder_limit_port_deg = -35.0;
    double rudder_limit_stbd_deg = 35.0;
    double rudder_rate_degps = 3.0;
    /// Recorded only; the constant-speed assumption makes it inert.
    double propeller_rpm = 180.0;
    /// Steady yaw rate per degree of starboard rudder, 1/s.
    double turn_gain = 90.0 / (31.0 * 25.0);
    double turn_lag_s = 5.0;
    /// Port turns use turn_gain / asymmetry_factor.
    double asymmetry_factor = 35.0 / 31.0;
    double kick_gain = 0.3;
    double speed_loss_gain = 0.15;
    double speed_recovery_s = 4.0;

    /// Throws ValidationError when an invariant does not hold.
    void validate() const;

    double clamp_rudder(double rudder_deg) const;
};

/// Planar vessel state. Heading is compass degrees in [0, 360).
struct ShipState {
    double x_m = 0.0;
    double y_m = 0.0;
    double heading_deg = 0.0;
    double u_mps = 0.0;
    double v_mps = 0.0;
    double yaw_rate_degps = 0.0;
    double rudder_deg = 0.0;

    bool operator==(const ShipState&) const = default;
};

/// Straight-ahead steady state at the origin: u = u0, no sway, no yaw, rudder 0.
ShipState trimmed_state(const ShipParams& params, double heading_deg = 0.0);

/// Advances the state by one explicit Euler step of length `dt`.
/// Commands outside the rudder limits are clamped; `clamped` reports it.
ShipState step(const ShipState& state, const ShipParams& params, double rudder_command_deg, double dt,
               bool& clamped);
ShipState step(const ShipState& state, const ShipParams& params, double rudder_command_deg, double dt);

/// Holds `rudder_deg` from the trimmed straight-ahead state for `duration_s`.
/// Returns all samples including the initial state.
std::vector<ShipState> simulate_turn(const ShipParams& params, double rudder_deg, double duration_s, double dt);

/// The steady advance speed u0 (the constant-speed contract).
double trim_steady_speed(const ShipParams& params);

struct CircleFit {
    double center_x_m = 0.0;
    double center_y_m = 0.0;
    double radius_m = 0.0;
};

/// Algebraic least squares circle through the sample positions.
CircleFit fit_circle(std::span<const ShipState> samples);

/// Signed lateral offset (starboard positive) of each sample from the line
/// through the first sample along its heading; returns the minimum.
double min_cross_track(std::span<const ShipState> samples);

}  // namespace cgtc
