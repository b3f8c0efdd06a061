#ifndef MIMOSIM_CHANNEL_HPP
#define MIMOSIM_CHANNEL_HPP

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mimosim/rng.hpp"
#include "mimosim/units.hpp"

namespace mimosim {

// Simplified two-ray ground reflection: gain = (h_t*h_r)^2 / d^4 with unit
// element gains. Table-style energy-detection and clear-channel thresholds
// are the received powers this model yields at 150 m and 225 m.
struct PathModel {
  double tx_power_dbm = 10.0;
  double antenna_height_m = 1.2;
  double d_min_m = 1.0;  // clamp for degenerate placements

  double tx_power_w() const { return dbm_to_watts(tx_power_dbm); }

  double path_gain(double distance_m) const {
    if (distance_m < d_min_m) {
      static std::atomic<bool> warned{false};
      if (!warned.exchange(true)) {
        std::fprintf(stderr, "channel: distance %.3f m below %.1f m, clamping\n",
                     distance_m, d_min_m);
      }
      distance_m = d_min_m;
    }
    const double hh = antenna_height_m * antenna_height_m;
    const double d2 = distance_m * distance_m;
    return (hh * hh) / (d2 * d2);
  }

  double rx_power_w(double distance_m) const {
    return tx_power_w() * path_gain(distance_m);
  }
};

// Per-(frame, receiver) received-power matrix: entries p_ij are the powers
// seen at receive antenna i from transmit antenna j, embedding the equal
// P_t/M power split and one Rayleigh small-scale draw per entry.
struct PowerMatrix {
  int n_rx = 0;
  int n_tx = 0;
  std::vector<double> p;  // row-major, watts
  int source = -1;
  std::uint64_t frame_id = 0;

  double& at(int i, int j) { return p[static_cast<std::size_t>(i) * n_tx + j]; }
  double at(int i, int j) const { return p[static_cast<std::size_t>(i) * n_tx + j]; }
};

// Sum of all entries: (P_t/M) * G_path * ||H||_F^2, the quantity every SINR
// expression consumes.
inline double frobenius_power(const PowerMatrix& pm) {
  return std::accumulate(pm.p.begin(), pm.p.end(), 0.0);
}

inline PowerMatrix draw_power_matrix(const PathModel& path, double distance_m,
                                     int m_tx, int n_rx, int source,
                                     std::uint64_t frame_id, RngStream& rng) {
  if (m_tx < 1 || n_rx < 1) throw std::invalid_argument("draw_power_matrix: M, N must be >= 1");
  PowerMatrix pm;
  pm.n_rx = n_rx;
  pm.n_tx = m_tx;
  pm.source = source;
  pm.frame_id = frame_id;
  pm.p.resize(static_cast<std::size_t>(n_rx) * m_tx);
  const double mean = path.tx_power_w() / m_tx * path.path_gain(distance_m);
  for (double& v : pm.p) v = mean * rng.exponential();
  return pm;
}

}  // namespace mimosim

#endif  // MIMOSIM_CHANNEL_HPP
