#ifndef MIMOSIM_UNITS_HPP
#define MIMOSIM_UNITS_HPP

#include <cmath>
#include <cstdint>

namespace mimosim {

// Simulation time is kept in integer nanoseconds so that event ordering and
// replay are exact on every platform.
using TimeNs = std::int64_t;

constexpr TimeNs kNsPerUs = 1000;
constexpr TimeNs kNsPerSec = 1000000000;
constexpr double kSpeedOfLightMps = 299792458.0;

inline TimeNs seconds_to_ns(double s) { return static_cast<TimeNs>(std::llround(s * 1e9)); }
inline double ns_to_seconds(TimeNs t) { return static_cast<double>(t) * 1e-9; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

inline TimeNs propagation_delay_ns(double distance_m) {
  return static_cast<TimeNs>(std::llround(distance_m / kSpeedOfLightMps * 1e9));
}

}  // namespace mimosim

#endif  // MIMOSIM_UNITS_HPP
