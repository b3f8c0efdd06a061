#ifndef MIMOSIM_METRICS_HPP
#define MIMOSIM_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimosim/units.hpp"

namespace mimosim {

enum class DropCause : std::uint8_t { kQueue, kRetryLimit, kChannel };

struct NodeMetrics {
  int node = -1;
  std::int64_t delivered_bits = 0;        // post-warm-up window
  std::int64_t frames_delivered = 0;
  std::int64_t delivered_bits_full = 0;   // whole run
  std::int64_t frames_delivered_full = 0;
  std::int64_t drops_queue = 0;
  std::int64_t drops_retry = 0;
  std::int64_t drops_channel = 0;
  double delay_sum_s = 0.0;
  std::int64_t delay_samples = 0;
  std::array<std::int64_t, 3> mode_histogram{};  // DATA sent per mode byte

  double mean_delay_s() const {
    return delay_samples > 0 ? delay_sum_s / static_cast<double>(delay_samples) : 0.0;
  }
};

// Jain's fairness index (sum x)^2 / (n * sum x^2); absent when all inputs are
// zero.
inline std::optional<double> jain_index(const std::vector<double>& x) {
  if (x.empty()) return std::nullopt;
  double s = 0.0, s2 = 0.0;
  for (double v : x) {
    s += v;
    s2 += v * v;
  }
  if (s2 <= 0.0) return std::nullopt;
  return s * s / (static_cast<double>(x.size()) * s2);
}

struct MetricsReport {
  double duration_s = 0.0;
  double warmup_s = 0.0;
  std::uint64_t seed = 0;
  std::vector<NodeMetrics> per_node;  // indexed by dense node index
  std::optional<double> jain;         // over all flow-source nodes

  double measure_interval_s() const { return duration_s - warmup_s; }

  double node_throughput_bps(std::size_t i) const {
    const double t = measure_interval_s();
    return t > 0.0 ? static_cast<double>(per_node[i].delivered_bits) / t : 0.0;
  }

  // CSV rows: run_id,node_id,throughput_bps,mean_delay_s,frames_delivered,
  //           frames_dropped_queue,frames_dropped_retry,frames_dropped_channel
  static std::string csv_header() {
    return "run_id,node_id,throughput_bps,mean_delay_s,frames_delivered,"
           "frames_dropped_queue,frames_dropped_retry,frames_dropped_channel\n";
  }

  std::string to_csv(const std::string& run_id) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < per_node.size(); ++i) {
      const NodeMetrics& nm = per_node[i];
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%d,%.10g,%.10g,%lld,%lld,%lld,%lld\n",
                    run_id.c_str(), nm.node, node_throughput_bps(i), nm.mean_delay_s(),
                    static_cast<long long>(nm.frames_delivered),
                    static_cast<long long>(nm.drops_queue),
                    static_cast<long long>(nm.drops_retry),
                    static_cast<long long>(nm.drops_channel));
      os << buf;
    }
    return os.str();
  }
};

// Run-side accumulator. Delivered bits and delay samples are credited to the
// flow's source node; the delay clock starts at the packet's enqueue instant
// (queueing and retransmissions included).
class MetricsCollector {
 public:
  explicit MetricsCollector(int n_nodes, TimeNs warmup_ns)
      : warmup_ns_(warmup_ns) {
    per_node_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) per_node_[i].node = i;
  }

  void record_delivery(int flow_src, std::int64_t payload_bits, TimeNs enqueue_ns,
                       TimeNs deliver_ns) {
    if (deliver_ns < enqueue_ns) throw std::logic_error("delivery before enqueue");
    NodeMetrics& nm = per_node_.at(flow_src);
    nm.delivered_bits_full += payload_bits;
    nm.frames_delivered_full += 1;
    if (deliver_ns >= warmup_ns_) {
      nm.delivered_bits += payload_bits;
      nm.frames_delivered += 1;
      nm.delay_sum_s += ns_to_seconds(deliver_ns - enqueue_ns);
      nm.delay_samples += 1;
    }
  }

  void record_drop(int node, DropCause cause) {
    NodeMetrics& nm = per_node_.at(node);
    switch (cause) {
      case DropCause::kQueue: ++nm.drops_queue; break;
      case DropCause::kRetryLimit: ++nm.drops_retry; break;
      case DropCause::kChannel: ++nm.drops_channel; break;
    }
  }

  void record_mode_use(int node, std::uint8_t mode_byte) {
    if (mode_byte < 3) ++per_node_.at(node).mode_histogram[mode_byte];
  }

  MetricsReport finalize(double duration_s, double warmup_s, std::uint64_t seed,
                         const std::vector<int>& flow_sources) const {
    MetricsReport r;
    r.duration_s = duration_s;
    r.warmup_s = warmup_s;
    r.seed = seed;
    r.per_node = per_node_;
    std::vector<double> thr;
    thr.reserve(flow_sources.size());
    for (int src : flow_sources) thr.push_back(r.node_throughput_bps(src));
    r.jain = jain_index(thr);
    return r;
  }

 private:
  TimeNs warmup_ns_;
  std::vector<NodeMetrics> per_node_;
};

// ---- cross-run aggregation ------------------------------------------------

// Two-sided 95% Student-t quantiles; linear interpolation between tabulated
// degrees of freedom, 1.96 asymptote beyond the table.
inline double t_quantile_975(int df) {
  static const std::pair<int, double> table[] = {
      {1, 12.706}, {2, 4.303}, {3, 3.182}, {4, 2.776}, {5, 2.571},
      {6, 2.447},  {7, 2.365}, {8, 2.306}, {9, 2.262}, {10, 2.228},
      {11, 2.201}, {12, 2.179}, {13, 2.160}, {14, 2.145}, {15, 2.131},
      {16, 2.120}, {17, 2.110}, {18, 2.101}, {19, 2.093}, {20, 2.086},
      {21, 2.080}, {22, 2.074}, {23, 2.069}, {24, 2.064}, {25, 2.060},
      {26, 2.056}, {27, 2.052}, {28, 2.048}, {29, 2.045}, {30, 2.042},
      {40, 2.021}, {60, 2.000}, {80, 1.990}, {100, 1.984}, {120, 1.980}};
  if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
  const auto n = sizeof(table) / sizeof(table[0]);
  if (df >= table[n - 1].first) return df > 200 ? 1.96 : table[n - 1].second;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (df == table[i].first) return table[i].second;
    if (df > table[i].first && df < table[i + 1].first) {
      const double f = static_cast<double>(df - table[i].first) /
                       (table[i + 1].first - table[i].first);
      return table[i].second + f * (table[i + 1].second - table[i].second);
    }
  }
  return table[n - 1].second;
}

struct Summary {
  double mean = 0.0;
  double ci95_half = 0.0;
  int n = 0;
  bool ci_available = false;
};

// Pooled mean with t-based 95% half-width. Samples are sorted before
// accumulation so the result is independent of input order.
inline Summary summarize(std::vector<double> samples) {
  Summary s;
  s.n = static_cast<int>(samples.size());
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / (s.n - 1));
  s.ci95_half = t_quantile_975(s.n - 1) * sd / std::sqrt(static_cast<double>(s.n));
  s.ci_available = true;
  return s;
}

}  // namespace mimosim

#endif  // MIMOSIM_METRICS_HPP
