#ifndef MIMOSIM_MAC_HPP
#define MIMOSIM_MAC_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "mimosim/phy.hpp"
#include "mimosim/units.hpp"

namespace mimosim {

enum class FrameKind : std::uint8_t { kRts, kCts, kData, kAck };

inline const char* to_string(FrameKind k) {
  switch (k) {
    case FrameKind::kRts: return "RTS";
    case FrameKind::kCts: return "CTS";
    case FrameKind::kData: return "DATA";
    case FrameKind::kAck: return "ACK";
  }
  return "?";
}

// On-wire encoding of the CTS mode byte. Values 3..255 are reserved.
enum : std::uint8_t {
  kModeByteFullDiversity = 0,        // Alamouti 2xN
  kModeByteMultiplexDiversity = 1,   // V-BLAST M = N-1
  kModeByteFullMultiplex = 2,        // V-BLAST M = N
  kModeByteNone = 0xff,              // field absent (non-CTS frames)
};

struct Frame {
  FrameKind kind = FrameKind::kRts;
  int src = -1;
  int dst = -1;
  std::uint32_t duration_us = 0;           // remaining handshake occupation
  std::uint8_t mode_byte = kModeByteNone;  // present on CTS only
  std::int64_t payload_bits = 0;           // DATA payload
  std::uint32_t seq = 0;
  bool retry = false;
  TimeNs enqueue_ns = 0;    // when the packet entered the transmit queue
  MimoMode tx_mode;         // PHY configuration this frame is sent with
  std::uint64_t frame_id = 0;
};

// 802.11 DSSS timing and sizes (Table-1 style PHY at 1 Mb/s).
struct MacParams {
  std::int64_t slot_us = 20;
  std::int64_t sifs_us = 10;
  std::int64_t difs_us = 50;
  int cw_min = 31;
  int cw_max = 1023;
  int short_retry_limit = 7;  // RTS attempts
  int long_retry_limit = 4;   // DATA attempts
  std::int64_t plcp_us = 192;  // preamble + PLCP header at the base rate
  int rts_bytes = 20;
  int cts_bytes = 14;
  int ack_bytes = 14;
  int data_overhead_bytes = 28;  // MAC header + FCS on DATA
  int payload_bytes = 1412;
  std::size_t queue_capacity = 400;
  std::int64_t timeout_margin_us = 25;  // propagation + rx-start slack

  std::int64_t mpdu_bits(FrameKind kind, std::int64_t payload_bits) const {
    switch (kind) {
      case FrameKind::kRts: return 8LL * rts_bytes;
      case FrameKind::kCts: return 8LL * cts_bytes;
      case FrameKind::kAck: return 8LL * ack_bytes;
      case FrameKind::kData: return 8LL * data_overhead_bytes + payload_bits;
    }
    return 0;
  }
};

// Time on air: PLCP at the base rate plus the MPDU at base rate * m_eff.
// V-BLAST shortens only the MPDU part; Alamouti airtime equals SISO.
inline TimeNs frame_airtime_ns(FrameKind kind, std::int64_t payload_bits,
                               const MacParams& mac, const PhyParams& phy,
                               const MimoMode& mode) {
  const double body_rate = phy.bit_rate_bps * mode.m_eff();
  const double body_s = static_cast<double>(mac.mpdu_bits(kind, payload_bits)) / body_rate;
  return mac.plcp_us * kNsPerUs + static_cast<TimeNs>(std::llround(body_s * 1e9));
}

namespace detail {
inline std::uint32_t to_us_ceil(TimeNs t) {
  return static_cast<std::uint32_t>((t + kNsPerUs - 1) / kNsPerUs);
}
}  // namespace detail

// Remaining-occupation duration field, covering every later frame of the
// four-way handshake plus the interleaving SIFS gaps. The RTS always
// announces a conservative SISO-rate DATA transfer; CTS and DATA reflect the
// negotiated mode; control frames themselves are SISO on air.
inline std::uint32_t duration_field_us(FrameKind kind, std::int64_t payload_bits,
                                       const MacParams& mac, const PhyParams& phy,
                                       const MimoMode& negotiated) {
  const TimeNs sifs = mac.sifs_us * kNsPerUs;
  const TimeNs cts = frame_airtime_ns(FrameKind::kCts, 0, mac, phy, MimoMode::siso());
  const TimeNs ack = frame_airtime_ns(FrameKind::kAck, 0, mac, phy, MimoMode::siso());
  switch (kind) {
    case FrameKind::kRts: {
      const TimeNs data = frame_airtime_ns(FrameKind::kData, payload_bits, mac, phy,
                                           MimoMode::siso());
      return detail::to_us_ceil(cts + data + ack + 3 * sifs);
    }
    case FrameKind::kCts: {
      const TimeNs data = frame_airtime_ns(FrameKind::kData, payload_bits, mac, phy,
                                           negotiated);
      return detail::to_us_ceil(data + ack + 2 * sifs);
    }
    case FrameKind::kData:
      return detail::to_us_ceil(ack + sifs);
    case FrameKind::kAck:
      return 0;
  }
  return 0;
}

// Three-mode selection of the joint MIMO MAC: compare the RTS-averaged SINR
// against the two switching thresholds.
inline MimoMode select_mimo_mode(double mean_sinr_db, double sinr_min_db,
                                 double sinr_max_db, int n_antennas) {
  if (n_antennas < 3) throw std::invalid_argument("select_mimo_mode: joint modes need N >= 3");
  if (!(sinr_min_db < sinr_max_db))
    throw std::invalid_argument("select_mimo_mode: need sinr_min < sinr_max");
  if (mean_sinr_db < sinr_min_db) return MimoMode::alamouti(n_antennas);
  if (mean_sinr_db < sinr_max_db) return MimoMode::vblast(n_antennas - 1, n_antennas);
  return MimoMode::vblast(n_antennas, n_antennas);
}

inline std::uint8_t mode_to_byte(const MimoMode& mode) {
  if (mode.scheme == MimoScheme::kAlamouti) return kModeByteFullDiversity;
  if (mode.scheme == MimoScheme::kVblast && mode.m == mode.n) return kModeByteFullMultiplex;
  return kModeByteMultiplexDiversity;
}

inline MimoMode mode_from_byte(std::uint8_t byte, int n_antennas) {
  switch (byte) {
    case kModeByteFullDiversity: return MimoMode::alamouti(n_antennas);
    case kModeByteMultiplexDiversity: return MimoMode::vblast(n_antennas - 1, n_antennas);
    case kModeByteFullMultiplex: return MimoMode::vblast(n_antennas, n_antennas);
    default: throw std::invalid_argument("mode_from_byte: reserved mode value");
  }
}

// Binary exponential backoff: the window doubles on failure up to cw_max and
// resets to cw_min on success.
inline int next_contention_window(int cw, const MacParams& mac) {
  return std::min(2 * (cw + 1) - 1, mac.cw_max);
}

}  // namespace mimosim

#endif  // MIMOSIM_MAC_HPP
