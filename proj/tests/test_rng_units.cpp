#include <catch2/catch_amalgamated.hpp>

#include "mimosim/rng.hpp"
#include "mimosim/units.hpp"

using namespace mimosim;

TEST_CASE("dB conversions round-trip", "[units]") {
  CHECK(db_to_linear(0.0) == Catch::Approx(1.0));
  CHECK(db_to_linear(10.0) == Catch::Approx(10.0));
  CHECK(linear_to_db(db_to_linear(-7.3)) == Catch::Approx(-7.3));
  CHECK(dbm_to_watts(0.0) == Catch::Approx(1e-3));
  CHECK(dbm_to_watts(30.0) == Catch::Approx(1.0));
  CHECK(watts_to_dbm(dbm_to_watts(-93.6)) == Catch::Approx(-93.6));
}

TEST_CASE("time conversions are ns-exact", "[units]") {
  CHECK(seconds_to_ns(1.0) == 1000000000);
  CHECK(seconds_to_ns(10e-6) == 10000);
  CHECK(ns_to_seconds(seconds_to_ns(0.25)) == Catch::Approx(0.25));
  // 150 m at c is almost exactly half a microsecond
  CHECK(propagation_delay_ns(150.0) == 500);
}

TEST_CASE("uniform stays in [0,1) and has the right mean", "[rng]") {
  RngStream rng(42);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("exponential draw has unit mean", "[rng]") {
  RngStream rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential();
  CHECK(sum / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("uniform_int covers the whole range", "[rng]") {
  RngStream rng(3);
  int seen[8] = {0};
  for (int i = 0; i < 8000; ++i) ++seen[rng.uniform_int(7)];
  for (int k = 0; k <= 7; ++k) CHECK(seen[k] > 0);
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_int(0) == 0);
}

TEST_CASE("substreams with different keys diverge, same keys repeat", "[rng]") {
  RngStream a(substream_seed(99, 1, 5));
  RngStream b(substream_seed(99, 1, 6));
  RngStream c(substream_seed(99, 1, 5));
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    const auto va = a.next_u64();
    const auto vb = b.next_u64();
    const auto vc = c.next_u64();
    if (va != vb) all_equal = false;
    REQUIRE(va == vc);
  }
  CHECK_FALSE(all_equal);
}
