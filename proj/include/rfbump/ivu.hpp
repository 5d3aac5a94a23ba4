#pragma once

// In-vehicle protocol agent: RSSI windowing, order-2 FIR trend filtering,
// approach/departure classification, -48 dBm trigger, payload handling with
// fallback and the iterative speed-limit schedule.

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfbump/beacon.hpp"
#include "rfbump/kinematics.hpp"
#include "rfbump/propagation.hpp"

namespace rfbump {

struct RssiSample {
  double t_s = 0.0;
  double rssi_dbm = 0.0;
};

// Fixed-duration sliding window of time-stamped RSSI samples.
class RssiWindow {
 public:
  explicit RssiWindow(double capacity_s = 10.0) : capacity_s_(capacity_s) {}

  // Returns false (sample dropped) when the timestamp is not strictly
  // increasing.
  bool push(const RssiSample& sample) {
    if (!samples_.empty() && sample.t_s <= samples_.back().t_s) {
      ++dropped_;
      return false;
    }
    samples_.push_back(sample);
    while (!samples_.empty() &&
           samples_.front().t_s < sample.t_s - capacity_s_) {
      samples_.pop_front();
    }
    return true;
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t dropped() const { return dropped_; }
  double capacity_s() const { return capacity_s_; }
  const std::deque<RssiSample>& samples() const { return samples_; }

  double span_s() const {
    return samples_.empty() ? 0.0 : samples_.back().t_s - samples_.front().t_s;
  }

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(samples_.size());
    for (const auto& s : samples_) v.push_back(s.rssi_dbm);
    return v;
  }

 private:
  double capacity_s_;
  std::deque<RssiSample> samples_;
  std::size_t dropped_ = 0;
};

// Moving-average FIR, y[n] = mean(x[n], ..., x[n-order]).
// Output length = input length - order.
inline std::vector<double> fir_filter(const std::vector<double>& samples,
                                      int order) {
  if (order < 0) throw std::domain_error("fir_filter: order must be >= 0");
  if (samples.size() <= static_cast<std::size_t>(order))
    throw std::domain_error("fir_filter: sequence shorter than order + 1");
  const std::size_t taps = static_cast<std::size_t>(order) + 1;
  std::vector<double> out;
  out.reserve(samples.size() - order);
  for (std::size_t n = order; n < samples.size(); ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < taps; ++i) acc += samples[n - i];
    out.push_back(acc / static_cast<double>(taps));
  }
  return out;
}

enum class IvuPhase { Idle, Acquiring, Approaching, Departing, Limiting, NearZeroZone };

inline const char* to_string(IvuPhase phase) {
  switch (phase) {
    case IvuPhase::Idle: return "Idle";
    case IvuPhase::Acquiring: return "Acquiring";
    case IvuPhase::Approaching: return "Approaching";
    case IvuPhase::Departing: return "Departing";
    case IvuPhase::Limiting: return "Limiting";
    case IvuPhase::NearZeroZone: return "NearZeroZone";
  }
  return "?";
}

enum class Trend { Approaching, Departing, Indeterminate };

struct IvuConfig {
  double trigger_rssi_dbm = -48.0;
  double acquisition_s = 10.0;
  double max_legal_speed_kmh = 120.0;
  int fallback_speed_kmh = 6;
  int fallback_zone_m = 20;
  double trend_hysteresis_db = 1.0;
  int filter_order = 2;
  // The IVU is provisioned with the deployment's radio parameters; RSSI
  // ranging (distance_from_rssi) needs them.
  RadioLinkParams radio;

  double max_legal_speed_mps() const { return kmh_to_mps(max_legal_speed_kmh); }

  void validate() const {
    if (trigger_rssi_dbm >= 0.0)
      throw std::invalid_argument("ivu: trigger_rssi_dbm must be < 0");
    if (acquisition_s <= 0.0)
      throw std::invalid_argument("ivu: acquisition_s must be > 0");
    if (fallback_speed_kmh <= 0 || fallback_speed_kmh > kBumpSpeedCeilingKmh)
      throw std::invalid_argument("ivu: fallback_speed_kmh out of range");
    if (fallback_zone_m <= 0)
      throw std::invalid_argument("ivu: fallback_zone_m must be > 0");
    if (trend_hysteresis_db < 0.0)
      throw std::invalid_argument("ivu: trend_hysteresis_db must be >= 0");
  }
};

struct IvuState {
  IvuPhase phase = IvuPhase::Idle;
  std::optional<double> trigger_odometer_m;
  double u_at_trigger_mps = 0.0;
  std::optional<BeaconPayload> payload;
  std::optional<double> zone_entry_odometer_m;
  std::size_t decode_failures = 0;
  // bookkeeping for acquisition timing and the lag-compensated trigger test
  std::optional<double> first_sample_t_s;
  std::optional<double> last_sample_odometer_m;
};

// Endpoint difference of the filtered window against the hysteresis band.
inline Trend classify_trend(const RssiWindow& window, const IvuConfig& config) {
  if (window.size() < static_cast<std::size_t>(config.filter_order) + 1)
    throw std::domain_error("classify_trend: insufficient data");
  const auto filtered = fir_filter(window.values(), config.filter_order);
  const double delta = filtered.back() - filtered.front();
  if (delta >= config.trend_hysteresis_db) return Trend::Approaching;
  if (delta <= -config.trend_hysteresis_db) return Trend::Departing;
  return Trend::Indeterminate;
}

namespace detail {

// The order-2 moving average lags the signal by one sample. The trigger
// therefore compares the range inferred from the filtered RSSI, shortened by
// the distance travelled over the last sample interval, against the range of
// the -48 dBm reference point. Without the correction the trigger anchor
// lands a full filter delay past the reference.
inline bool trigger_condition(const IvuState& state, double filtered_dbm,
                              double odometer_m, const IvuConfig& config) {
  double est_distance_m;
  try {
    est_distance_m = distance_from_rssi(config.radio, filtered_dbm);
  } catch (const std::domain_error&) {
    return true;  // stronger than the 1 m level: effectively on top of the RSU
  }
  double travel_m = 0.0;
  if (state.last_sample_odometer_m)
    travel_m = odometer_m - *state.last_sample_odometer_m;
  const double trigger_distance_m =
      distance_from_rssi(config.radio, config.trigger_rssi_dbm);
  return est_distance_m - travel_m <= trigger_distance_m;
}

}  // namespace detail

// One protocol step per received RSSI sample (Fig-style state machine:
// Idle -> Acquiring -> Approaching/Departing -> Limiting).
inline IvuState on_rssi_sample(IvuState state, RssiWindow& window,
                               const RssiSample& sample,
                               const VehicleState& vehicle,
                               const IvuConfig& config) {
  if (!window.push(sample)) return state;  // malformed sample dropped
  if (!state.first_sample_t_s) state.first_sample_t_s = sample.t_s;

  switch (state.phase) {
    case IvuPhase::Idle:
      state.phase = IvuPhase::Acquiring;
      break;
    case IvuPhase::Acquiring:
      if (sample.t_s - *state.first_sample_t_s >= config.acquisition_s &&
          window.size() > static_cast<std::size_t>(config.filter_order)) {
        switch (classify_trend(window, config)) {
          case Trend::Approaching: state.phase = IvuPhase::Approaching; break;
          case Trend::Departing: state.phase = IvuPhase::Departing; break;
          case Trend::Indeterminate: break;  // keep acquiring
        }
      }
      break;
    case IvuPhase::Approaching: {
      if (window.size() <= static_cast<std::size_t>(config.filter_order)) break;
      const auto filtered = fir_filter(window.values(), config.filter_order);
      if (detail::trigger_condition(state, filtered.back(),
                                    vehicle.odometer_m, config)) {
        state.phase = IvuPhase::Limiting;
        state.trigger_odometer_m = vehicle.odometer_m;
        state.u_at_trigger_mps = vehicle.speed_mps;
      }
      break;
    }
    case IvuPhase::Departing:
    case IvuPhase::Limiting:
    case IvuPhase::NearZeroZone:
      break;  // departure never triggers; past the trigger the anchor is fixed
  }
  state.last_sample_odometer_m = vehicle.odometer_m;
  return state;
}

// Stores the first successfully decoded payload; failures only counted.
inline IvuState on_beacon(IvuState state, const DecodeResult& decode) {
  if (decode.ok()) {
    if (!state.payload) state.payload = decode.payload;
  } else {
    ++state.decode_failures;
  }
  return state;
}

inline BeaconPayload effective_payload(const IvuState& state,
                                       const IvuConfig& config) {
  if (state.payload) return *state.payload;
  return {config.fallback_speed_kmh, config.fallback_zone_m};
}

// Current limiter setting. Mutates phase bookkeeping: records the zone entry
// when the braking curve first reaches the bump speed and lifts the limit
// once the zone length has been travelled. lookahead_m lets the caller
// evaluate the curve at the end of the upcoming integration step so the
// vehicle rides the curve instead of lagging it by one tick.
inline double active_speed_limit(IvuState& state, const VehicleState& vehicle,
                                 const FrictionModel& friction,
                                 const IvuConfig& config,
                                 double lookahead_m = 0.0) {
  const double max_legal = config.max_legal_speed_mps();
  if (state.phase == IvuPhase::Limiting) {
    const BeaconPayload payload = effective_payload(state, config);
    const double bump_speed = kmh_to_mps(payload.bump_speed_kmh);
    const double s =
        std::max(0.0, vehicle.odometer_m + lookahead_m - *state.trigger_odometer_m);
    const double curve = speed_at_distance_mps(state.u_at_trigger_mps, friction, s);
    if (curve <= bump_speed) {
      state.phase = IvuPhase::NearZeroZone;
      state.zone_entry_odometer_m = vehicle.odometer_m;
      return bump_speed;
    }
    return curve;
  }
  if (state.phase == IvuPhase::NearZeroZone) {
    const BeaconPayload payload = effective_payload(state, config);
    if (vehicle.odometer_m - *state.zone_entry_odometer_m >=
        static_cast<double>(payload.zone_length_m)) {
      state.phase = IvuPhase::Departing;  // past the zone, limit lifted
      return max_legal;
    }
    return kmh_to_mps(payload.bump_speed_kmh);
  }
  return max_legal;
}

}  // namespace rfbump
