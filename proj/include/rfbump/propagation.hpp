#pragma once

// Free-space RF channel math: path loss, link budget, link margin, range
// solving and RSSI-based distance inversion. All quantities stay in dB/dBm.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rfbump {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct RadioLinkParams {
  double tx_power_dbm = 10.0;
  double tx_gain_dbi = 15.0;
  double tx_loss_db = 5.0;
  double misc_loss_db = 5.0;
  double rx_gain_dbi = 8.0;
  double rx_loss_db = 5.0;
  double rx_sensitivity_dbm = -90.0;
  double frequency_hz = 2.4e9;

  void validate() const {
    if (frequency_hz <= 0.0)
      throw std::invalid_argument("radio: frequency_hz must be > 0");
    if (tx_loss_db < 0.0 || misc_loss_db < 0.0 || rx_loss_db < 0.0)
      throw std::invalid_argument("radio: loss fields must be >= 0");
    if (rx_sensitivity_dbm >= tx_power_dbm)
      throw std::invalid_argument(
          "radio: rx_sensitivity_dbm must be below tx_power_dbm");
  }
};

// Sum of all budget terms except the distance-dependent path loss.
inline double fixed_budget_db(const RadioLinkParams& p) {
  return p.tx_power_dbm + p.tx_gain_dbi - p.tx_loss_db - p.misc_loss_db +
         p.rx_gain_dbi - p.rx_loss_db;
}

inline double fspl_db(double distance_m, double frequency_hz) {
  if (distance_m <= 0.0)
    throw std::domain_error("fspl_db: distance must be > 0");
  if (frequency_hz <= 0.0)
    throw std::domain_error("fspl_db: frequency must be > 0");
  static const double k_db = 20.0 * std::log10(4.0 * M_PI / kSpeedOfLight);
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(frequency_hz) +
         k_db;
}

inline double received_power_dbm(const RadioLinkParams& p, double distance_m) {
  return fixed_budget_db(p) - fspl_db(distance_m, p.frequency_hz);
}

inline double link_margin_db(const RadioLinkParams& p, double distance_m) {
  return received_power_dbm(p, distance_m) - p.rx_sensitivity_dbm;
}

// Distance at which the link margin crosses zero, from inverting the
// 20*log10(d) law in closed form.
inline double max_range_m(const RadioLinkParams& p) {
  if (link_margin_db(p, 1.0) <= 0.0)
    throw std::domain_error("max_range_m: no coverage even at 1 m");
  const double fspl_allowed = fixed_budget_db(p) - p.rx_sensitivity_dbm;
  const double k_db = 20.0 * std::log10(4.0 * M_PI / kSpeedOfLight);
  const double exponent =
      (fspl_allowed - 20.0 * std::log10(p.frequency_hz) - k_db) / 20.0;
  return std::pow(10.0, exponent);
}

// Exact inverse of received_power_dbm under pure FSPL.
inline double distance_from_rssi(const RadioLinkParams& p, double rssi_dbm) {
  if (rssi_dbm > received_power_dbm(p, 1.0))
    throw std::domain_error(
        "distance_from_rssi: power above the 1 m level is out of model");
  const double fspl = fixed_budget_db(p) - rssi_dbm;
  const double k_db = 20.0 * std::log10(4.0 * M_PI / kSpeedOfLight);
  const double exponent =
      (fspl - 20.0 * std::log10(p.frequency_hz) - k_db) / 20.0;
  return std::pow(10.0, exponent);
}

// Additive log-normal shadowing (normal in dB). Draws are a pure function of
// (seed, draw_index) so sequences replay identically and out of order.
struct ShadowingModel {
  double sigma_db = 3.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (sigma_db < 0.0)
      throw std::invalid_argument("shadowing: sigma_db must be >= 0");
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t bits) {
  // 53-bit mantissa, result in (0, 1]
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller; portable across compilers unlike
// std::normal_distribution.
inline double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t s = splitmix64(seed ^ 0xD6E8FEB86659FD93ULL);
  const double u1 = uniform01(splitmix64(s + 2 * index));
  const double u2 = uniform01(splitmix64(s + 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace detail

inline double sample_rssi(const RadioLinkParams& p, double distance_m,
                          const ShadowingModel& shadowing,
                          std::uint64_t draw_index) {
  const double mean = received_power_dbm(p, distance_m);
  if (shadowing.sigma_db == 0.0) return mean;
  return mean +
         shadowing.sigma_db * detail::standard_normal(shadowing.seed, draw_index);
}

}  // namespace rfbump
