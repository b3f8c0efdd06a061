#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "mimosim/phy.hpp"
#include "mimosim/rng.hpp"

using namespace mimosim;

namespace {
PowerMatrix matrix_with_sum(int n, int m, double total_w) {
  PowerMatrix pm;
  pm.n_rx = n;
  pm.n_tx = m;
  pm.p.assign(static_cast<std::size_t>(n) * m, total_w / (n * m));
  return pm;
}
}  // namespace

TEST_CASE("Alamouti SINR", "[phy][sinr]") {
  SECTION("no interference reduces exactly to S/N0") {
    CHECK(sinr_alamouti(4e-3, 0.0, 1e-3) == 4.0);
  }
  SECTION("identical interferer, vanishing noise, tends to 0 dB") {
    const PowerMatrix sig = matrix_with_sum(2, 2, 2e-3);
    CHECK(sinr_alamouti(sig, {sig}, 1e-15) == Catch::Approx(1.0));
  }
  SECTION("direct arithmetic: 4 mW over {1,1} mW plus 2 mW noise") {
    const PowerMatrix sig = matrix_with_sum(2, 2, 4e-3);
    const std::vector<PowerMatrix> mai = {matrix_with_sum(2, 1, 1e-3),
                                          matrix_with_sum(2, 3, 1e-3)};
    CHECK(sinr_alamouti(sig, mai, 2e-3) == Catch::Approx(1.0));
  }
}

TEST_CASE("V-BLAST branch-averaged SINR", "[phy][sinr]") {
  SECTION("no interference: (S/N)/Pn") {
    CHECK(sinr_vblast(6e-3, 0.0, 1e-3, 2) == Catch::Approx(3.0));
  }
  SECTION("noise-free value is independent of N") {
    const double a = sinr_vblast(6e-3, 3e-3, 0.0, 2);
    const double b = sinr_vblast(6e-3, 3e-3, 0.0, 7);
    CHECK(a == Catch::Approx(b));
    CHECK(a == Catch::Approx(2.0));
  }
  SECTION("direct arithmetic: 6 mW, N=3, 3 mW interference, 1 mW noise") {
    const PowerMatrix sig = matrix_with_sum(3, 3, 6e-3);
    const std::vector<PowerMatrix> mai = {matrix_with_sum(3, 2, 3e-3)};
    CHECK(sinr_vblast(sig, mai, 1e-3, 3) == Catch::Approx(1.0));
  }
}

TEST_CASE("scalar SINR and cross-operation consistency", "[phy][sinr]") {
  CHECK(sinr_siso(2.0, 0.0, 1.0) == 2.0);
  CHECK(sinr_siso(2.0, 2.0, 0.0) == 1.0);
  // scalar form equals the V-BLAST form at N = M = 1 on the same draw
  RngStream rng(4);
  for (int i = 0; i < 50; ++i) {
    const double s = rng.exponential(1e-9);
    const double mai = rng.exponential(5e-10);
    const double noise = 4e-13;
    CHECK(sinr_siso(s, mai, noise) == Catch::Approx(sinr_vblast(s, mai, noise, 1)));
  }
  // common scaling of all transmit powers cancels in the interference-limited
  // regime
  CHECK(sinr_siso(7e-3, 3e-3, 0.0) == Catch::Approx(sinr_siso(7e-9, 3e-9, 0.0)));
  CHECK(sinr_alamouti(7e-3, 3e-3, 0.0) == Catch::Approx(sinr_alamouti(7e-9, 3e-9, 0.0)));
}

TEST_CASE("sum decomposition: matrix SINR equals scalar SINR on collapsed sums",
          "[phy][sinr]") {
  RngStream rng(6);
  PowerMatrix sig = matrix_with_sum(3, 2, 0.0);
  for (double& v : sig.p) v = rng.exponential(1e-10);
  PowerMatrix mai = matrix_with_sum(3, 2, 0.0);
  for (double& v : mai.p) v = rng.exponential(2e-11);
  const double noise = 4.4e-13;
  CHECK(sinr_alamouti(sig, {mai}, noise) ==
        Catch::Approx(sinr_siso(frobenius_power(sig), frobenius_power(mai), noise)));
}

TEST_CASE("DBPSK curve limits", "[phy][ber]") {
  const AtTable at = AtTable::builtin();
  CHECK(ber(MimoMode::siso(), 1e9, at) == Catch::Approx(0.0).margin(1e-300));
  CHECK(ber(MimoMode::siso(), 1e-12, at) == Catch::Approx(0.5).epsilon(1e-6));
  CHECK(ber(MimoMode::alamouti(2), 2.0, at) == Catch::Approx(0.5 * std::exp(-2.0)));
}

TEST_CASE("V-BLAST BER model", "[phy][ber]") {
  const AtTable at = AtTable::builtin();
  SECTION("M=N collapses to a_t/(4*gamma)") {
    const double g = 50.0;
    CHECK(ber(MimoMode::vblast(2, 2), g, at) == Catch::Approx(at.at(2, 2) / (4.0 * g)));
  }
  SECTION("clamped at 1/2 near zero SNR") {
    CHECK(ber(MimoMode::vblast(2, 2), 1e-6, at) == 0.5);
  }
  SECTION("monotone nonincreasing in SINR for every mode") {
    for (MimoMode mode : {MimoMode::siso(), MimoMode::alamouti(3), MimoMode::vblast(2, 3),
                          MimoMode::vblast(3, 3)}) {
      double prev = 1.0;
      for (double g = 0.01; g < 1e5; g *= 1.8) {
        const double b = ber(mode, g, at);
        REQUIRE(b <= prev + 1e-15);
        prev = b;
      }
    }
  }
  SECTION("high-SNR log-log slope approaches -(N-M+1)") {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 4}, {2, 4}}) {
      const double g1 = db_to_linear(20.0), g2 = db_to_linear(30.0);
      const double slope = (std::log10(ber(MimoMode::vblast(m, n), g2, at)) -
                            std::log10(ber(MimoMode::vblast(m, n), g1, at)));
      CHECK(slope == Catch::Approx(-(n - m + 1)).margin(0.15));
    }
  }
  SECTION("missing calibration entry faults") {
    AtTable empty;
    CHECK_THROWS_AS(ber(MimoMode::vblast(2, 2), 10.0, empty), std::out_of_range);
  }
}

TEST_CASE("chunk timeline geometry", "[phy][chunk]") {
  PhyParams phy;
  const MimoMode mode = MimoMode::siso();
  const TimeNs t0 = 1000000, t1 = t0 + 11712000;  // full SISO DATA airtime
  const double sig = 1e-10;

  SECTION("no interference: a single chunk spanning the frame") {
    auto chunks = chunk_timeline(t0, t1, sig, {}, mode, phy, 192000);
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].start == t0);
    CHECK(chunks[0].end == t1);
    CHECK(chunks[0].n_interferers == 0);
  }

  SECTION("one interferer strictly inside: three chunks") {
    std::vector<Overlap> mai = {{t0 + 2000000, t0 + 4000000, 1e-11}};
    auto chunks = chunk_timeline(t0, t1, sig, mai, mode, phy, 192000);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].n_interferers == 0);
    CHECK(chunks[1].n_interferers == 1);
    CHECK(chunks[2].n_interferers == 0);
    CHECK(chunks[1].sinr < chunks[0].sinr);
  }

  SECTION("head/mid/tail interferers give four unequal parts") {
    // A overlaps the head, B sits mid-frame, C starts as B ends and runs past
    // the tail: four parts with different interferer sets.
    std::vector<Overlap> mai = {{t0, t0 + 1500000, 1e-11},
                                {t0 + 4000000, t0 + 6500000, 2e-11},
                                {t0 + 6500000, t1, 3e-11}};
    auto chunks = chunk_timeline(t0, t1, sig, mai, mode, phy, 192000);
    REQUIRE(chunks.size() == 4);
    CHECK(chunks[0].n_interferers == 1);
    CHECK(chunks[1].n_interferers == 0);
    CHECK(chunks[2].n_interferers == 1);
    CHECK(chunks[3].n_interferers == 1);
    // unequal parts, distinct SINRs where the interferer sets differ
    CHECK(chunks[2].sinr != chunks[3].sinr);
    CHECK(chunks[0].end - chunks[0].start != chunks[1].end - chunks[1].start);
  }

  SECTION("disjoint interferers tile into alternating clean/busy chunks") {
    std::vector<Overlap> mai = {{t0, t0 + 1500000, 1e-11},
                                {t0 + 4000000, t0 + 6500000, 2e-11},
                                {t0 + 9000000, t1, 3e-11}};
    auto chunks = chunk_timeline(t0, t1, sig, mai, mode, phy, 192000);
    REQUIRE(chunks.size() == 6);
    int busy = 0;
    for (const Chunk& c : chunks) busy += c.n_interferers > 0;
    CHECK(busy == 3);
  }

  SECTION("chunks tile the reception exactly") {
    std::vector<Overlap> mai = {{t0 - 500000, t0 + 1500000, 1e-11},
                                {t0 + 1500000, t0 + 2500000, 1e-11},
                                {t0 + 9000000, t1 + 500000, 1e-11}};
    auto chunks = chunk_timeline(t0, t1, sig, mai, mode, phy, 192000);
    REQUIRE(!chunks.empty());
    CHECK(chunks.front().start == t0);
    CHECK(chunks.back().end == t1);
    for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
      CHECK(chunks[i].end == chunks[i + 1].start);
    }
  }
}

TEST_CASE("chunk bit accounting respects the preamble/body rates", "[phy][chunk]") {
  // 192 us of PLCP at 1 Mb/s, body at 2 Mb/s under V-BLAST M=2
  CHECK(bits_in_interval(0, 192000, 192000, 1e6, 2e6) == 192);
  CHECK(bits_in_interval(192000, 192000 + 1000000, 192000, 1e6, 2e6) == 2000);
  CHECK(bits_in_interval(0, 192000 + 1000000, 192000, 1e6, 2e6) == 2192);
  CHECK(bits_in_interval(100, 100, 192000, 1e6, 2e6) == 0);
  // partial microsecond rounds up
  CHECK(bits_in_interval(192000, 192000 + 1500, 192000, 1e6, 1e6) == 2);
}

TEST_CASE("packet error rate composes chunk success probabilities", "[phy][per]") {
  const AtTable at = AtTable::builtin();
  const MimoMode mode = MimoMode::siso();

  SECTION("error-free chunks give PER 0") {
    std::vector<Chunk> chunks = {{0, 1000, 1e12, 1000, 0}};
    CHECK(packet_error_rate(chunks, mode, at) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("single chunk, BER 1/2, one bit") {
    std::vector<Chunk> chunks = {{0, 1000, 1e-12, 1, 0}};
    CHECK(packet_error_rate(chunks, mode, at) == Catch::Approx(0.5).epsilon(1e-6));
  }
  SECTION("direct evaluation of the product form") {
    // BER 0.001 over 1000 bits then an error-free tail
    const double g = std::log(0.5 / 0.001);  // DBPSK inverse
    std::vector<Chunk> chunks = {{0, 1000, g, 1000, 1}, {1000, 1500, 1e12, 500, 0}};
    const double expected = 1.0 - std::pow(1.0 - 0.001, 1000);
    CHECK(packet_error_rate(chunks, mode, at) == Catch::Approx(expected).epsilon(1e-9));
  }
  SECTION("PER bounded and monotone in bits") {
    const double g = std::log(0.5 / 0.01);
    std::vector<Chunk> a = {{0, 1000, g, 100, 0}};
    std::vector<Chunk> b = {{0, 1000, g, 200, 0}};
    const double pa = packet_error_rate(a, mode, at);
    const double pb = packet_error_rate(b, mode, at);
    CHECK(pa >= 0.0);
    CHECK(pb <= 1.0);
    CHECK(pb > pa);
  }
}

TEST_CASE("duration-weighted mean SINR", "[phy][chunk]") {
  std::vector<Chunk> chunks = {{0, 1000, 4.0, 1, 0}, {1000, 4000, 8.0, 3, 0}};
  CHECK(mean_sinr_linear(chunks) == Catch::Approx((1 * 4.0 + 3 * 8.0) / 4.0));
}

TEST_CASE("clear channel assessment policies", "[phy][cca]") {
  PhyParams phy;

  SECTION("aggregate exactly at the threshold is busy") {
    phy.cca_method = CcaMethod::kSum;
    CHECK(cca_state(phy.cca_threshold_w(), 1, phy) == CcaState::kBusy);
    CHECK(cca_state(phy.cca_threshold_w() * 0.999, 1, phy) == CcaState::kIdle);
  }

  SECTION("SUM sees N times what AVERAGE sees") {
    // four antennas each collecting p: SUM compares 4p, AVERAGE compares p
    const double p = phy.cca_threshold_w();
    phy.cca_method = CcaMethod::kSum;
    CHECK(cca_state(4 * p, 4, phy) == CcaState::kBusy);
    phy.cca_method = CcaMethod::kAverage;
    CHECK(cca_state(4 * p, 4, phy) == CcaState::kBusy);
    CHECK(cca_state(4 * p * 0.999 / 4, 4, phy) == CcaState::kIdle);
  }

  SECTION("containment: AVERAGE busy implies SUM busy") {
    RngStream rng(8);
    for (int i = 0; i < 2000; ++i) {
      const double ambient = rng.exponential(phy.cca_threshold_w());
      const int n = 1 + static_cast<int>(rng.uniform_int(4));
      PhyParams avg = phy;
      avg.cca_method = CcaMethod::kAverage;
      PhyParams sum = phy;
      sum.cca_method = CcaMethod::kSum;
      if (cca_state(ambient, n, avg) == CcaState::kBusy) {
        REQUIRE(cca_state(ambient, n, sum) == CcaState::kBusy);
      }
    }
  }

  SECTION("matrix overload aggregates all on-air transmissions") {
    PowerMatrix a = matrix_with_sum(2, 1, phy.cca_threshold_w());
    PowerMatrix b = matrix_with_sum(2, 1, phy.cca_threshold_w());
    phy.cca_method = CcaMethod::kSum;
    CHECK(cca_state(std::vector<PowerMatrix>{a, b}, 2, phy) == CcaState::kBusy);
    phy.cca_method = CcaMethod::kAverage;
    CHECK(cca_state(std::vector<PowerMatrix>{a, b}, 2, phy) == CcaState::kBusy);
  }
}

TEST_CASE("noise power derives from bandwidth and noise figure", "[phy]") {
  PhyParams phy;
  // -174 dBm/Hz + 10log10(22 MHz) + 7 dB is about -93.6 dBm
  CHECK(watts_to_dbm(phy.noise_w()) == Catch::Approx(-93.576).margin(0.01));
  CHECK(phy.ed_threshold_dbm > phy.cca_threshold_dbm);
}

TEST_CASE("mode validation catches the domain errors", "[phy]") {
  CHECK_THROWS_AS(MimoMode::vblast(4, 3).validate(), std::invalid_argument);
  CHECK_NOTHROW(MimoMode::vblast(3, 3).validate());
  CHECK_NOTHROW(MimoMode::alamouti(1).validate());
  MimoMode bad = MimoMode::alamouti(2);
  bad.m = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
