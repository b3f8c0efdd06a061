#ifndef MIMOSIM_PHY_HPP
#define MIMOSIM_PHY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mimosim/calibration.hpp"
#include "mimosim/channel.hpp"
#include "mimosim/units.hpp"

namespace mimosim {

enum class MimoScheme : std::uint8_t { kSiso, kAlamouti, kVblast };

// Decode-side link abstraction. SISO keeps M = 1 for decoding; the CCA path
// still aggregates over however many receive antennas the node has.
struct MimoMode {
  MimoScheme scheme = MimoScheme::kSiso;
  int m = 1;  // transmit antennas
  int n = 1;  // receive antennas

  static MimoMode siso() { return {MimoScheme::kSiso, 1, 1}; }
  static MimoMode alamouti(int n_rx) { return {MimoScheme::kAlamouti, 2, n_rx}; }
  static MimoMode vblast(int m_tx, int n_rx) { return {MimoScheme::kVblast, m_tx, n_rx}; }

  // Airtime multiplier: V-BLAST sends M symbols per symbol period; Alamouti
  // and SISO occupy one symbol period per symbol.
  int m_eff() const { return scheme == MimoScheme::kVblast ? m : 1; }

  void validate() const {
    if (m < 1 || n < 1) throw std::invalid_argument("MimoMode: M, N must be >= 1");
    if (scheme == MimoScheme::kAlamouti && m != 2)
      throw std::invalid_argument("MimoMode: Alamouti requires M = 2");
    if (scheme == MimoScheme::kVblast && m > n)
      throw std::invalid_argument("MimoMode: V-BLAST requires M <= N");
    if (scheme == MimoScheme::kSiso && m != 1)
      throw std::invalid_argument("MimoMode: SISO requires M = 1");
  }

  bool operator==(const MimoMode&) const = default;
};

enum class CcaMethod : std::uint8_t { kSum, kAverage };

struct PhyParams {
  double bandwidth_hz = 22e6;  // 802.11 DSSS channel width
  double noise_figure_db = 7.0;
  double bit_rate_bps = 1e6;
  double ed_threshold_dbm = -73.8764;
  double cca_threshold_dbm = -80.9201;
  CcaMethod cca_method = CcaMethod::kAverage;

  // Thermal floor over the system bandwidth plus receiver noise figure.
  double noise_w() const {
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return dbm_to_watts(dbm);
  }
  double ed_threshold_w() const { return dbm_to_watts(ed_threshold_dbm); }
  double cca_threshold_w() const { return dbm_to_watts(cca_threshold_dbm); }
};

// ---- effective SINR ----------------------------------------------------
//
// The power-matrix entries already carry the per-antenna P_t/M split, so the
// Frobenius sums below realize the E_s/2 (resp. P_t/M) factors directly.

inline double sinr_alamouti(double signal_sum_w, double interference_sum_w, double noise_w) {
  return signal_sum_w / (noise_w + interference_sum_w);
}

inline double sinr_vblast(double signal_sum_w, double interference_sum_w, double noise_w,
                          int n_rx) {
  return (signal_sum_w / n_rx) / (noise_w + interference_sum_w / n_rx);
}

inline double sinr_siso(double signal_w, double interference_w, double noise_w) {
  return signal_w / (noise_w + interference_w);
}

inline double sinr_alamouti(const PowerMatrix& signal,
                            const std::vector<PowerMatrix>& interferers, double noise_w) {
  double mai = 0.0;
  for (const PowerMatrix& k : interferers) mai += frobenius_power(k);
  return sinr_alamouti(frobenius_power(signal), mai, noise_w);
}

inline double sinr_vblast(const PowerMatrix& signal,
                          const std::vector<PowerMatrix>& interferers, double noise_w,
                          int n_rx) {
  double mai = 0.0;
  for (const PowerMatrix& k : interferers) mai += frobenius_power(k);
  return sinr_vblast(frobenius_power(signal), mai, noise_w, n_rx);
}

// SINR used when a frame is decoded. The caller supplies the aggregates the
// mode consumes: Frobenius sums for Alamouti/V-BLAST, single-antenna powers
// for SISO decoding (N_used = 1; the other antennas still contribute to CCA).
inline double decode_sinr(const MimoMode& mode, double signal_w,
                          double interference_w, double noise_w) {
  switch (mode.scheme) {
    case MimoScheme::kAlamouti:
      return sinr_alamouti(signal_w, interference_w, noise_w);
    case MimoScheme::kVblast:
      return sinr_vblast(signal_w, interference_w, noise_w, mode.n);
    case MimoScheme::kSiso:
      return sinr_siso(signal_w, interference_w, noise_w);
  }
  return 0.0;
}

// ---- BER models --------------------------------------------------------

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// SISO and post-combining Alamouti use the DBPSK curve; V-BLAST uses the
// calibrated average-BER model a_t * C(2(N-M)+1, N-M+1) / (4*sinr)^(N-M+1),
// clamped at 1/2 where the asymptote exceeds it.
inline double ber(const MimoMode& mode, double sinr_linear, const AtTable& at) {
  if (sinr_linear <= 0.0) return 0.5;
  if (mode.scheme == MimoScheme::kVblast) {
    const int order = mode.n - mode.m + 1;
    const double pe1 =
        static_cast<double>(binomial(2 * (mode.n - mode.m) + 1, order)) /
        std::pow(4.0 * sinr_linear, order);
    return std::min(0.5, at.at(mode.m, mode.n) * pe1);
  }
  return std::min(0.5, 0.5 * std::exp(-sinr_linear));
}

// ---- chunk-segmented reception ------------------------------------------

struct Chunk {
  TimeNs start = 0;
  TimeNs end = 0;
  double sinr = 0.0;       // linear
  std::int64_t n_bits = 0;
  int n_interferers = 0;
};

struct Overlap {
  TimeNs start = 0;  // clamped to the reception interval by chunk_timeline
  TimeNs end = 0;
  double power_sum_w = 0.0;  // Frobenius sum of that transmission at this node
};

// Bits carried in [a, b) given the frame's preamble/body split. The PLCP
// preamble+header run at the base rate; the body runs at rate * m_eff.
inline std::int64_t bits_in_interval(TimeNs a, TimeNs b, TimeNs preamble_end,
                                     double base_rate_bps, double body_rate_bps) {
  if (b <= a) return 0;
  const TimeNs pre = std::max<TimeNs>(0, std::min(b, preamble_end) - a);
  const TimeNs body = (b - a) - pre;
  const double bits = (static_cast<double>(pre) * base_rate_bps +
                       static_cast<double>(body) * body_rate_bps) * 1e-9;
  return static_cast<std::int64_t>(std::ceil(bits - 1e-9));
}

// Splits one reception into maximal constant-interference intervals and
// computes each interval's SINR and bit count.
inline std::vector<Chunk> chunk_timeline(TimeNs rx_start, TimeNs rx_end,
                                         double signal_sum_w,
                                         const std::vector<Overlap>& interferers,
                                         const MimoMode& mode, const PhyParams& phy,
                                         TimeNs preamble_ns) {
  if (rx_end < rx_start) throw std::invalid_argument("chunk_timeline: bad reception interval");
  std::vector<TimeNs> cuts;
  cuts.push_back(rx_start);
  cuts.push_back(rx_end);
  for (const Overlap& ov : interferers) {
    if (ov.end <= rx_start || ov.start >= rx_end) continue;
    if (ov.start > rx_start) cuts.push_back(ov.start);
    if (ov.end < rx_end) cuts.push_back(ov.end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double noise = phy.noise_w();
  const double body_rate = phy.bit_rate_bps * mode.m_eff();
  const TimeNs preamble_end = rx_start + preamble_ns;

  std::vector<Chunk> chunks;
  chunks.reserve(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Chunk c;
    c.start = cuts[i];
    c.end = cuts[i + 1];
    double mai = 0.0;
    for (const Overlap& ov : interferers) {
      if (ov.start < c.end && ov.end > c.start) {
        mai += ov.power_sum_w;
        ++c.n_interferers;
      }
    }
    c.sinr = decode_sinr(mode, signal_sum_w, mai, noise);
    c.n_bits = bits_in_interval(c.start, c.end, preamble_end, phy.bit_rate_bps, body_rate);
    chunks.push_back(c);
  }
  return chunks;
}

// PER = 1 - prod_i (1 - BER_i)^(n_bits,i)
inline double packet_error_rate(const std::vector<Chunk>& chunks, const MimoMode& mode,
                                const AtTable& at) {
  double log_ok = 0.0;
  for (const Chunk& c : chunks) {
    if (c.n_bits <= 0) continue;
    const double b = ber(mode, c.sinr, at);
    if (b >= 1.0) return 1.0;
    log_ok += static_cast<double>(c.n_bits) * std::log1p(-b);
  }
  return -std::expm1(log_ok);
}

// Duration-weighted mean SINR in the linear domain (the RTS measurement the
// receiver feeds into MIMO mode selection).
inline double mean_sinr_linear(const std::vector<Chunk>& chunks) {
  double num = 0.0;
  double den = 0.0;
  for (const Chunk& c : chunks) {
    const double w = static_cast<double>(c.end - c.start);
    num += w * c.sinr;
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

// ---- clear channel assessment -------------------------------------------

enum class CcaState : std::uint8_t { kIdle, kBusy };

// SUM compares the aggregate power collected over all antennas against the
// threshold; AVERAGE first divides that aggregate by the antenna count N.
inline CcaState cca_state(double ambient_sum_w, int n_rx, const PhyParams& phy) {
  const double v = phy.cca_method == CcaMethod::kAverage
                       ? ambient_sum_w / std::max(1, n_rx)
                       : ambient_sum_w;
  return v >= phy.cca_threshold_w() ? CcaState::kBusy : CcaState::kIdle;
}

inline CcaState cca_state(const std::vector<PowerMatrix>& ambient, int n_rx,
                          const PhyParams& phy) {
  double total = 0.0;
  for (const PowerMatrix& pm : ambient) total += frobenius_power(pm);
  return cca_state(total, n_rx, phy);
}

}  // namespace mimosim

#endif  // MIMOSIM_PHY_HPP
