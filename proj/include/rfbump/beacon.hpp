#pragma once

// RSU side: beacon payload wire codec with CRC-8 integrity check and the
// beacon transmission schedule.
//
// Wire format, bit-exact: [0xB5][speed u8][zone u16, LSB first][crc8]

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rfbump/propagation.hpp"

namespace rfbump {

inline constexpr std::uint8_t kFrameMagic = 0xB5;
inline constexpr std::size_t kFrameSize = 5;
inline constexpr int kBumpSpeedCeilingKmh = 12;

using BeaconFrame = std::array<std::uint8_t, kFrameSize>;

struct BeaconPayload {
  int bump_speed_kmh = 6;
  int zone_length_m = 20;

  bool valid() const {
    return bump_speed_kmh > 0 && bump_speed_kmh <= kBumpSpeedCeilingKmh &&
           zone_length_m > 0 && zone_length_m <= 0xFFFF;
  }
  friend bool operator==(const BeaconPayload&, const BeaconPayload&) = default;
};

// CRC-8, polynomial 0x07, init 0x00, no reflection, no final xor.
inline std::uint8_t crc8(std::span<const std::uint8_t> data) {
  if (data.empty()) throw std::domain_error("crc8: empty input");
  std::uint8_t crc = 0x00;
  for (std::uint8_t byte : data) {
    crc ^= byte;
    for (int bit = 0; bit < 8; ++bit)
      crc = (crc & 0x80) ? static_cast<std::uint8_t>((crc << 1) ^ 0x07)
                         : static_cast<std::uint8_t>(crc << 1);
  }
  return crc;
}

inline BeaconFrame encode_frame(const BeaconPayload& payload) {
  if (!payload.valid())
    throw std::invalid_argument("encode_frame: payload out of range");
  BeaconFrame frame{};
  frame[0] = kFrameMagic;
  frame[1] = static_cast<std::uint8_t>(payload.bump_speed_kmh);
  frame[2] = static_cast<std::uint8_t>(payload.zone_length_m & 0xFF);
  frame[3] = static_cast<std::uint8_t>((payload.zone_length_m >> 8) & 0xFF);
  frame[4] = crc8(std::span(frame.data(), 4));
  return frame;
}

enum class DecodeStatus { Ok, BadLength, BadMagic, BadCrc, OutOfRange };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::BadLength;
  BeaconPayload payload;  // meaningful only when status == Ok

  bool ok() const { return status == DecodeStatus::Ok; }
};

inline DecodeResult decode_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() != kFrameSize) return {DecodeStatus::BadLength, {}};
  if (frame[0] != kFrameMagic) return {DecodeStatus::BadMagic, {}};
  if (crc8(frame.first(4)) != frame[4]) return {DecodeStatus::BadCrc, {}};
  BeaconPayload payload{frame[1], frame[2] | (frame[3] << 8)};
  if (!payload.valid()) return {DecodeStatus::OutOfRange, {}};
  return {DecodeStatus::Ok, payload};
}

struct RsuConfig {
  bool enabled = true;
  double beacon_interval_s = 0.1;
  BeaconPayload payload;
  RadioLinkParams radio;
  double rsu_position_m = 500.0;

  void validate() const {
    if (beacon_interval_s <= 0.0)
      throw std::invalid_argument("rsu: beacon_interval_s must be > 0");
    if (!payload.valid())
      throw std::invalid_argument("rsu: payload out of range");
    radio.validate();
  }
};

// Transmission timestamps in [t_start, t_end): every multiple of the beacon
// interval. Times are computed as k*interval so adjacent query windows
// concatenate exactly.
inline std::vector<double> beacons_in_interval(const RsuConfig& config,
                                               double t_start_s,
                                               double t_end_s) {
  if (t_start_s > t_end_s)
    throw std::invalid_argument("beacons_in_interval: t_start > t_end");
  std::vector<double> times;
  if (!config.enabled) return times;
  const double interval = config.beacon_interval_s;
  auto k = static_cast<std::int64_t>(std::ceil(t_start_s / interval));
  if (static_cast<double>(k) * interval < t_start_s) ++k;  // fp guard
  for (; static_cast<double>(k) * interval < t_end_s; ++k) {
    const double t = static_cast<double>(k) * interval;
    if (t >= t_start_s) times.push_back(t);
  }
  return times;
}

}  // namespace rfbump
