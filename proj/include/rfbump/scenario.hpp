#pragma once

// Scenario documents: flat `key = value` text with `#` comments, keys
// namespaced by module. Unknown keys and invariant violations are load
// errors. Unset keys take the canonical defaults.

#include <cctype>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rfbump/beacon.hpp"
#include "rfbump/ivu.hpp"
#include "rfbump/kinematics.hpp"
#include "rfbump/propagation.hpp"

namespace rfbump {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  RadioLinkParams radio;
  FrictionModel friction;
  RsuConfig rsu;
  IvuConfig ivu;
  ShadowingModel shadowing{.sigma_db = 0.0, .seed = 1};
  VehicleState vehicle_initial{.position_m = 0.0,
                               .speed_mps = kmh_to_mps(120.0),
                               .odometer_m = 0.0,
                               .desired_speed_mps = kmh_to_mps(120.0)};
  double bump_site_m = 580.0;
  double dt_s = 0.01;
  double duration_s = 40.0;
  double accel_cap_mps2 = kDefaultAccelCapMps2;
  double payload_corrupt_prob = 0.0;

  void validate() const {
    try {
      radio.validate();
      friction.validate();
      rsu.validate();
      ivu.validate();
      shadowing.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string("scenario invariant: ") + e.what());
    }
    if (dt_s <= 0.0) throw ScenarioError("scenario invariant: sim.dt_s must be > 0");
    if (duration_s <= 0.0)
      throw ScenarioError("scenario invariant: sim.duration_s must be > 0");
    if (accel_cap_mps2 <= 0.0)
      throw ScenarioError("scenario invariant: sim.accel_cap_mps2 must be > 0");
    if (payload_corrupt_prob < 0.0 || payload_corrupt_prob > 1.0)
      throw ScenarioError(
          "scenario invariant: rsu.payload_corrupt_prob must be in [0, 1]");
    if (vehicle_initial.position_m >= rsu.rsu_position_m)
      throw ScenarioError(
          "scenario invariant: vehicle must start before the RSU");
    if (vehicle_initial.speed_mps < 0.0)
      throw ScenarioError(
          "scenario invariant: vehicle.initial_speed_kmh must be >= 0");
    if (bump_site_m <= rsu.rsu_position_m)
      throw ScenarioError(
          "scenario invariant: sim.bump_site_m must be past the RSU");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_number(const std::string& value, int line) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("scenario parse error at line " + std::to_string(line) +
                        ": not a number: '" + value + "'");
  }
  if (pos != value.size())
    throw ScenarioError("scenario parse error at line " + std::to_string(line) +
                        ": trailing characters in '" + value + "'");
  return out;
}

inline bool parse_bool(const std::string& value, int line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ScenarioError("scenario parse error at line " + std::to_string(line) +
                      ": expected true/false, got '" + value + "'");
}

}  // namespace detail

inline Scenario load_scenario(std::istream& in) {
  Scenario sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = detail::trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("scenario parse error at line " +
                          std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ScenarioError("scenario parse error at line " +
                          std::to_string(line_no) + ": empty key or value");

    auto num = [&] { return detail::parse_number(value, line_no); };
    if (key == "radio.tx_power_dbm") sc.radio.tx_power_dbm = num();
    else if (key == "radio.tx_gain_dbi") sc.radio.tx_gain_dbi = num();
    else if (key == "radio.tx_loss_db") sc.radio.tx_loss_db = num();
    else if (key == "radio.misc_loss_db") sc.radio.misc_loss_db = num();
    else if (key == "radio.rx_gain_dbi") sc.radio.rx_gain_dbi = num();
    else if (key == "radio.rx_loss_db") sc.radio.rx_loss_db = num();
    else if (key == "radio.rx_sensitivity_dbm") sc.radio.rx_sensitivity_dbm = num();
    else if (key == "radio.frequency_hz") sc.radio.frequency_hz = num();
    else if (key == "friction.mu") sc.friction.mu = num();
    else if (key == "friction.g_decel_mps2") sc.friction.g_decel_mps2 = num();
    else if (key == "rsu.enabled") sc.rsu.enabled = detail::parse_bool(value, line_no);
    else if (key == "rsu.beacon_interval_s") sc.rsu.beacon_interval_s = num();
    else if (key == "rsu.position_m") sc.rsu.rsu_position_m = num();
    else if (key == "rsu.bump_speed_kmh") sc.rsu.payload.bump_speed_kmh = static_cast<int>(num());
    else if (key == "rsu.zone_length_m") sc.rsu.payload.zone_length_m = static_cast<int>(num());
    else if (key == "rsu.payload_corrupt_prob") sc.payload_corrupt_prob = num();
    else if (key == "ivu.trigger_rssi_dbm") sc.ivu.trigger_rssi_dbm = num();
    else if (key == "ivu.acquisition_s") sc.ivu.acquisition_s = num();
    else if (key == "ivu.max_legal_speed_kmh") sc.ivu.max_legal_speed_kmh = num();
    else if (key == "ivu.fallback_speed_kmh") sc.ivu.fallback_speed_kmh = static_cast<int>(num());
    else if (key == "ivu.fallback_zone_m") sc.ivu.fallback_zone_m = static_cast<int>(num());
    else if (key == "ivu.trend_hysteresis_db") sc.ivu.trend_hysteresis_db = num();
    else if (key == "shadowing.sigma_db") sc.shadowing.sigma_db = num();
    else if (key == "shadowing.seed") sc.shadowing.seed = static_cast<std::uint64_t>(num());
    else if (key == "vehicle.initial_position_m") sc.vehicle_initial.position_m = num();
    else if (key == "vehicle.initial_speed_kmh") sc.vehicle_initial.speed_mps = kmh_to_mps(num());
    else if (key == "vehicle.desired_speed_kmh") sc.vehicle_initial.desired_speed_mps = kmh_to_mps(num());
    else if (key == "sim.bump_site_m") sc.bump_site_m = num();
    else if (key == "sim.dt_s") sc.dt_s = num();
    else if (key == "sim.duration_s") sc.duration_s = num();
    else if (key == "sim.accel_cap_mps2") sc.accel_cap_mps2 = num();
    else
      throw ScenarioError("scenario parse error at line " +
                          std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  // the RSU and IVU share the deployment's radio parameters
  sc.rsu.radio = sc.radio;
  sc.ivu.radio = sc.radio;
  sc.validate();
  return sc;
}

inline Scenario load_scenario(const std::string& text) {
  std::istringstream in(text);
  return load_scenario(in);
}

}  // namespace rfbump
