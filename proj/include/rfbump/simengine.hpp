#pragma once

// Deterministic fixed-step world: advances the vehicle, schedules RSU
// beacons, applies the channel per beacon, feeds the IVU and records a full
// per-tick trace.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rfbump/beacon.hpp"
#include "rfbump/ivu.hpp"
#include "rfbump/kinematics.hpp"
#include "rfbump/propagation.hpp"
#include "rfbump/scenario.hpp"

namespace rfbump {

struct TraceRecord {
  double t_s = 0.0;
  double position_m = 0.0;
  double speed_mps = 0.0;
  std::optional<double> rssi_raw_dbm;       // absent when no beacon this tick
  std::optional<double> rssi_filtered_dbm;  // absent until the filter warms up
  IvuPhase ivu_phase = IvuPhase::Idle;
  double active_limit_mps = 0.0;
  std::string beacon_decode_status;  // empty when no beacon delivered
};

struct RunSummary {
  bool triggered = false;
  double trigger_odometer_m = 0.0;
  double trigger_distance_to_rsu_m = 0.0;  // RSU minus vehicle position at trigger
  double u_at_trigger_mps = 0.0;
  std::optional<double> zone_entry_odometer_m;
  std::optional<double> zone_exit_odometer_m;
  // Max speed over the realised near-zero zone; the enforcement figure the
  // exit-code contract checks against payload speed + 0.1 m/s.
  std::optional<double> bump_site_speed_mps;
  BeaconPayload payload_used;
  std::size_t beacons_delivered = 0;
  std::size_t decode_failures = 0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  RunSummary summary;
  IvuState final_ivu;
};

inline const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::Ok: return "ok";
    case DecodeStatus::BadLength: return "bad_length";
    case DecodeStatus::BadMagic: return "bad_magic";
    case DecodeStatus::BadCrc: return "bad_crc";
    case DecodeStatus::OutOfRange: return "out_of_range";
  }
  return "?";
}

inline RunResult run(const Scenario& sc) {
  sc.validate();
  RunResult result;
  VehicleState vehicle = sc.vehicle_initial;
  IvuState ivu;
  RssiWindow window(sc.ivu.acquisition_s);
  const auto ticks = static_cast<std::int64_t>(std::llround(sc.duration_s / sc.dt_s));
  result.trace.reserve(static_cast<std::size_t>(ticks));

  const BeaconFrame clean_frame = encode_frame(sc.rsu.payload);
  // separate deterministic stream for the per-beacon corruption draw
  const std::uint64_t corrupt_stream = detail::splitmix64(sc.shadowing.seed ^ 0x5BD1E995u);

  for (std::int64_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * sc.dt_s;
    TraceRecord rec;
    rec.t_s = t;
    rec.position_m = vehicle.position_m;
    rec.speed_mps = vehicle.speed_mps;

    for (double t_b : beacons_in_interval(sc.rsu, t, t + sc.dt_s)) {
      const auto beacon_index = static_cast<std::uint64_t>(
          std::llround(t_b / sc.rsu.beacon_interval_s));
      double d = std::fabs(sc.rsu.rsu_position_m - vehicle.position_m);
      if (d < 0.01) d = 0.01;
      if (received_power_dbm(sc.radio, d) < sc.radio.rx_sensitivity_dbm)
        continue;  // below sensitivity: the beacon never reaches the IVU
      const double rssi = sample_rssi(sc.radio, d, sc.shadowing, beacon_index);

      BeaconFrame frame = clean_frame;
      if (sc.payload_corrupt_prob > 0.0 &&
          detail::uniform01(detail::splitmix64(corrupt_stream + beacon_index)) <
              sc.payload_corrupt_prob) {
        frame[4] ^= 0xFF;
      }
      const DecodeResult decode = decode_frame(frame);
      ivu = on_beacon(ivu, decode);
      ivu = on_rssi_sample(ivu, window, {t_b, rssi}, vehicle, sc.ivu);

      ++result.summary.beacons_delivered;
      rec.rssi_raw_dbm = rssi;
      rec.beacon_decode_status = to_string(decode.status);
      if (window.size() > static_cast<std::size_t>(sc.ivu.filter_order))
        rec.rssi_filtered_dbm =
            fir_filter(window.values(), sc.ivu.filter_order).back();
    }

    const double limit = active_speed_limit(ivu, vehicle, sc.friction, sc.ivu,
                                            vehicle.speed_mps * sc.dt_s);
    rec.ivu_phase = ivu.phase;
    rec.active_limit_mps = limit;
    result.trace.push_back(rec);

    vehicle = step_vehicle(vehicle, limit, sc.friction, sc.dt_s, sc.accel_cap_mps2);
  }

  RunSummary& sum = result.summary;
  sum.decode_failures = ivu.decode_failures;
  sum.payload_used = effective_payload(ivu, sc.ivu);
  if (ivu.trigger_odometer_m) {
    sum.triggered = true;
    sum.trigger_odometer_m = *ivu.trigger_odometer_m;
    const double trigger_position =
        sc.vehicle_initial.position_m +
        (*ivu.trigger_odometer_m - sc.vehicle_initial.odometer_m);
    sum.trigger_distance_to_rsu_m = sc.rsu.rsu_position_m - trigger_position;
    sum.u_at_trigger_mps = ivu.u_at_trigger_mps;
  }
  if (ivu.zone_entry_odometer_m) {
    sum.zone_entry_odometer_m = *ivu.zone_entry_odometer_m;
    const double zone_exit =
        *ivu.zone_entry_odometer_m + sum.payload_used.zone_length_m;
    if (ivu.phase == IvuPhase::Departing) sum.zone_exit_odometer_m = zone_exit;
    double worst = 0.0;
    const double odo_offset =
        sc.vehicle_initial.odometer_m - sc.vehicle_initial.position_m;
    for (const TraceRecord& r : result.trace) {
      const double odo = r.position_m + odo_offset;
      if (odo >= *ivu.zone_entry_odometer_m && odo < zone_exit)
        worst = std::max(worst, r.speed_mps);
    }
    sum.bump_site_speed_mps = worst;
  }
  result.final_ivu = ivu;
  return result;
}

namespace detail {

inline void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  out += buf;
}

}  // namespace detail

inline const char kTraceCsvHeader[] =
    "t_s,position_m,speed_mps,rssi_raw_dbm,rssi_filtered_dbm,ivu_phase,"
    "active_limit_mps,beacon_decode_status";

inline std::string write_trace_csv(const std::vector<TraceRecord>& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const TraceRecord& r : trace) {
    detail::append_num(out, r.t_s);
    out += ',';
    detail::append_num(out, r.position_m);
    out += ',';
    detail::append_num(out, r.speed_mps);
    out += ',';
    if (r.rssi_raw_dbm) detail::append_num(out, *r.rssi_raw_dbm);
    out += ',';
    if (r.rssi_filtered_dbm) detail::append_num(out, *r.rssi_filtered_dbm);
    out += ',';
    out += to_string(r.ivu_phase);
    out += ',';
    detail::append_num(out, r.active_limit_mps);
    out += ',';
    out += r.beacon_decode_status;
    out += '\n';
  }
  return out;
}

}  // namespace rfbump
