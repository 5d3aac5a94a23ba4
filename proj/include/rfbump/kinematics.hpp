#pragma once

// Longitudinal vehicle model: stopping distance, the braking
// velocity-distance law, time-to-RSU and fixed-step state integration.

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfbump {

inline constexpr double kmh_to_mps(double kmh) { return kmh / 3.6; }
inline constexpr double mps_to_kmh(double mps) { return mps * 3.6; }

struct FrictionModel {
  double mu = 0.7;
  double g_decel_mps2 = 10.0;

  // Effective braking rate; the velocity-distance law decelerates at mu*g.
  double braking_rate_mps2() const { return mu * g_decel_mps2; }

  void validate() const {
    if (mu <= 0.0 || mu > 1.0)
      throw std::invalid_argument("friction: mu must be in (0, 1]");
    if (g_decel_mps2 <= 0.0)
      throw std::invalid_argument("friction: g_decel_mps2 must be > 0");
  }
};

struct VehicleState {
  double position_m = 0.0;
  double speed_mps = 0.0;
  double odometer_m = 0.0;
  double desired_speed_mps = 0.0;
};

inline double stopping_distance_m(double u_mps, const FrictionModel& f) {
  if (u_mps < 0.0)
    throw std::domain_error("stopping_distance_m: speed must be >= 0");
  return u_mps * u_mps / (2.0 * f.mu * f.g_decel_mps2);
}

// v = sqrt(u^2 - 2*g*mu*s), clamped to zero past the stopping point.
inline double speed_at_distance_mps(double u_mps, const FrictionModel& f,
                                    double s_m) {
  if (s_m < 0.0)
    throw std::domain_error("speed_at_distance_mps: distance must be >= 0");
  const double v2 = u_mps * u_mps - 2.0 * f.g_decel_mps2 * f.mu * s_m;
  return v2 > 0.0 ? std::sqrt(v2) : 0.0;
}

inline double time_to_rsu_s(double speed_kmh, double range_m) {
  if (speed_kmh <= 0.0)
    throw std::domain_error("time_to_rsu_s: speed must be > 0");
  if (range_m < 0.0)
    throw std::domain_error("time_to_rsu_s: range must be >= 0");
  return range_m / kmh_to_mps(speed_kmh);
}

inline constexpr double kDefaultAccelCapMps2 = 2.0;

// One integration tick. Speed tracks min(desired, limit), decelerating at
// most mu*g and accelerating at most accel_cap; position and odometer
// advance by the trapezoid of speed over dt.
inline VehicleState step_vehicle(const VehicleState& state,
                                 double active_limit_mps,
                                 const FrictionModel& f, double dt_s,
                                 double accel_cap_mps2 = kDefaultAccelCapMps2) {
  if (dt_s <= 0.0) throw std::domain_error("step_vehicle: dt must be > 0");
  const double target =
      std::max(0.0, std::min(state.desired_speed_mps, active_limit_mps));
  double next_speed = state.speed_mps;
  if (state.speed_mps > target) {
    next_speed = std::max(target, state.speed_mps - f.braking_rate_mps2() * dt_s);
  } else if (state.speed_mps < target) {
    next_speed = std::min(target, state.speed_mps + accel_cap_mps2 * dt_s);
  }
  const double ds = 0.5 * (state.speed_mps + next_speed) * dt_s;
  VehicleState next = state;
  next.speed_mps = next_speed;
  next.position_m += ds;
  next.odometer_m += ds;
  return next;
}

}  // namespace rfbump
