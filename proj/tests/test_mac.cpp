#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "mimosim/mac.hpp"

using namespace mimosim;

namespace {
const MacParams mac;
const PhyParams phy;
constexpr std::int64_t kPayloadBits = 1412 * 8;
}  // namespace

TEST_CASE("frame airtimes at 1 Mb/s DSSS", "[mac][timing]") {
  // DATA: 192 us PLCP + (28 + 1412) bytes at 1 Mb/s
  CHECK(frame_airtime_ns(FrameKind::kData, kPayloadBits, mac, phy, MimoMode::siso()) ==
        (192 + 11296 + 224) * 1000);
  SECTION("V-BLAST M=2 halves the MPDU portion only") {
    CHECK(frame_airtime_ns(FrameKind::kData, kPayloadBits, mac, phy, MimoMode::vblast(2, 2)) ==
          (192 + 5760) * 1000);
  }
  SECTION("Alamouti airtime is identical to SISO") {
    CHECK(frame_airtime_ns(FrameKind::kData, kPayloadBits, mac, phy, MimoMode::alamouti(4)) ==
          frame_airtime_ns(FrameKind::kData, kPayloadBits, mac, phy, MimoMode::siso()));
  }
  SECTION("control frames") {
    CHECK(frame_airtime_ns(FrameKind::kRts, 0, mac, phy, MimoMode::siso()) == (192 + 160) * 1000);
    CHECK(frame_airtime_ns(FrameKind::kCts, 0, mac, phy, MimoMode::siso()) == (192 + 112) * 1000);
    CHECK(frame_airtime_ns(FrameKind::kAck, 0, mac, phy, MimoMode::siso()) == (192 + 112) * 1000);
  }
}

TEST_CASE("duration fields cover the remaining handshake", "[mac][timing]") {
  const std::uint32_t cts_us = 192 + 112;
  const std::uint32_t ack_us = 192 + 112;
  const std::uint32_t data_siso_us = 192 + 11520;

  SECTION("RTS always announces a SISO-rate DATA transfer") {
    const std::uint32_t expected = cts_us + data_siso_us + ack_us + 3 * 10;
    CHECK(duration_field_us(FrameKind::kRts, kPayloadBits, mac, phy, MimoMode::siso()) ==
          expected);
    // ... even when the negotiated mode argument says otherwise
    CHECK(duration_field_us(FrameKind::kRts, kPayloadBits, mac, phy, MimoMode::vblast(4, 4)) ==
          expected);
  }
  SECTION("CTS reflects the negotiated mode") {
    const std::uint32_t data_m2 = 192 + 11520 / 2;
    CHECK(duration_field_us(FrameKind::kCts, kPayloadBits, mac, phy, MimoMode::vblast(2, 3)) ==
          data_m2 + ack_us + 2 * 10);
    CHECK(duration_field_us(FrameKind::kCts, kPayloadBits, mac, phy, MimoMode::alamouti(3)) ==
          data_siso_us + ack_us + 2 * 10);
  }
  SECTION("DATA covers the ACK, ACK covers nothing") {
    CHECK(duration_field_us(FrameKind::kData, kPayloadBits, mac, phy, MimoMode::vblast(2, 2)) ==
          ack_us + 10);
    CHECK(duration_field_us(FrameKind::kAck, 0, mac, phy, MimoMode::siso()) == 0);
  }
  SECTION("medium-busy time never exceeds the RTS announcement") {
    for (MimoMode mode : {MimoMode::siso(), MimoMode::alamouti(4), MimoMode::vblast(2, 4),
                          MimoMode::vblast(4, 4)}) {
      const TimeNs actual =
          3 * mac.sifs_us * 1000 +
          frame_airtime_ns(FrameKind::kCts, 0, mac, phy, MimoMode::siso()) +
          frame_airtime_ns(FrameKind::kData, kPayloadBits, mac, phy, mode) +
          frame_airtime_ns(FrameKind::kAck, 0, mac, phy, MimoMode::siso());
      const TimeNs announced =
          static_cast<TimeNs>(
              duration_field_us(FrameKind::kRts, kPayloadBits, mac, phy, mode)) *
          1000;
      CHECK(actual <= announced);
    }
  }
}

TEST_CASE("three-mode selection against the switching thresholds", "[mac][select]") {
  SECTION("the paper's operating points at (5, 23) dB") {
    CHECK(select_mimo_mode(3.0, 5.0, 23.0, 4) == MimoMode::alamouti(4));
    CHECK(select_mimo_mode(10.0, 5.0, 23.0, 4) == MimoMode::vblast(3, 4));
    CHECK(select_mimo_mode(25.0, 5.0, 23.0, 4) == MimoMode::vblast(4, 4));
  }
  SECTION("boundaries are half-open: SINR_min maps to the middle mode") {
    CHECK(select_mimo_mode(5.0, 5.0, 23.0, 3) == MimoMode::vblast(2, 3));
    CHECK(select_mimo_mode(23.0, 5.0, 23.0, 3) == MimoMode::vblast(3, 3));
  }
  SECTION("piecewise constant with exactly two breakpoints") {
    MimoMode prev = select_mimo_mode(-10.0, 5.0, 23.0, 4);
    int switches = 0;
    for (double s = -10.0; s <= 40.0; s += 0.25) {
      const MimoMode m = select_mimo_mode(s, 5.0, 23.0, 4);
      if (!(m == prev)) {
        ++switches;
        prev = m;
      }
    }
    CHECK(switches == 2);
  }
  SECTION("degenerate thresholds model HYB-A / HYB-B") {
    const double inf = std::numeric_limits<double>::infinity();
    // HYB-A: never full multiplexing
    CHECK(select_mimo_mode(80.0, 8.0, inf, 3) == MimoMode::vblast(2, 3));
    // HYB-B: never full diversity
    CHECK(select_mimo_mode(-40.0, -inf, 20.0, 3) == MimoMode::vblast(2, 3));
  }
  SECTION("domain errors") {
    CHECK_THROWS_AS(select_mimo_mode(10.0, 5.0, 23.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(select_mimo_mode(10.0, 23.0, 5.0, 4), std::invalid_argument);
  }
}

TEST_CASE("CTS mode byte wire encoding", "[mac][select]") {
  CHECK(mode_to_byte(MimoMode::alamouti(4)) == kModeByteFullDiversity);
  CHECK(mode_to_byte(MimoMode::vblast(3, 4)) == kModeByteMultiplexDiversity);
  CHECK(mode_to_byte(MimoMode::vblast(4, 4)) == kModeByteFullMultiplex);
  for (std::uint8_t b : {0, 1, 2}) {
    CHECK(mode_to_byte(mode_from_byte(b, 4)) == b);
  }
  CHECK_THROWS_AS(mode_from_byte(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(mode_from_byte(0xff, 4), std::invalid_argument);
}

TEST_CASE("contention window ladder", "[mac][backoff]") {
  int cw = mac.cw_min;
  for (int expected : {63, 127, 255, 511, 1023, 1023, 1023}) {
    cw = next_contention_window(cw, mac);
    CHECK(cw == expected);
  }
}
