#ifndef MIMOSIM_SIMULATION_HPP
#define MIMOSIM_SIMULATION_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mimosim/calibration.hpp"
#include "mimosim/channel.hpp"
#include "mimosim/event_queue.hpp"
#include "mimosim/mac.hpp"
#include "mimosim/metrics.hpp"
#include "mimosim/phy.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/topology.hpp"
#include "mimosim/units.hpp"

namespace mimosim {

enum class MimoPolicy : std::uint8_t { kSiso, kAlamouti, kVblast, kHybA, kHybB, kHybC };

inline const char* to_string(MimoPolicy p) {
  switch (p) {
    case MimoPolicy::kSiso: return "SISO";
    case MimoPolicy::kAlamouti: return "ALAMOUTI";
    case MimoPolicy::kVblast: return "VBLAST";
    case MimoPolicy::kHybA: return "HYB_A";
    case MimoPolicy::kHybB: return "HYB_B";
    case MimoPolicy::kHybC: return "HYB_C";
  }
  return "?";
}

struct SimConfig {
  double duration_s = 10.0;
  double warmup_s = 0.0;
  std::uint64_t seed = 1;
  MimoPolicy policy = MimoPolicy::kSiso;
  int m = 1;  // transmit antennas (fixed V-BLAST); Alamouti always uses 2
  int n = 1;  // receive antennas at every node
  double sinr_min_db = 5.0;
  double sinr_max_db = 23.0;
  PhyParams phy;
  MacParams mac;
  PathModel path;
  AtTable at = AtTable::builtin();

  bool is_joint() const {
    return policy == MimoPolicy::kHybA || policy == MimoPolicy::kHybB ||
           policy == MimoPolicy::kHybC;
  }

  MimoMode fixed_data_mode() const {
    switch (policy) {
      case MimoPolicy::kSiso: return MimoMode::siso();
      case MimoPolicy::kAlamouti: return MimoMode::alamouti(n);
      case MimoPolicy::kVblast: return MimoMode::vblast(m, n);
      default: throw std::logic_error("fixed_data_mode: joint policy");
    }
  }

  // Effective switching thresholds: HYB-A never leaves the lower pair of
  // modes, HYB-B never drops to full diversity.
  double effective_sinr_min() const {
    return policy == MimoPolicy::kHybB ? -std::numeric_limits<double>::infinity()
                                       : sinr_min_db;
  }
  double effective_sinr_max() const {
    return policy == MimoPolicy::kHybA ? std::numeric_limits<double>::infinity()
                                       : sinr_max_db;
  }

  void validate() const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("config: duration must be > 0");
    if (warmup_s < 0.0 || warmup_s >= duration_s)
      throw std::invalid_argument("config: warmup must be in [0, duration)");
    if (n < 1) throw std::invalid_argument("config: N must be >= 1");
    if (is_joint()) {
      if (n < 3) throw std::invalid_argument("config: joint policies require N >= 3");
      if (policy == MimoPolicy::kHybC && !(sinr_min_db < sinr_max_db))
        throw std::invalid_argument("config: need sinr_min < sinr_max");
    } else {
      fixed_data_mode().validate();
    }
    if (mac.queue_capacity < 1) throw std::invalid_argument("config: queue capacity must be >= 1");
    if (!(phy.bit_rate_bps > 0.0)) throw std::invalid_argument("config: bit rate must be > 0");
    if (!(phy.ed_threshold_dbm > phy.cca_threshold_dbm))
      throw std::invalid_argument("config: ED threshold must exceed CCA threshold");
    // Any V-BLAST mode this run can use must have its a_t coefficient now,
    // never mid-run.
    auto need = [&](int mm, int nn) {
      if (!at.has(mm, nn))
        throw std::invalid_argument("config: missing a_t calibration for M=" +
                                    std::to_string(mm) + " N=" + std::to_string(nn));
    };
    if (policy == MimoPolicy::kVblast) need(m, n);
    if (policy == MimoPolicy::kHybA) need(n - 1, n);
    if (policy == MimoPolicy::kHybB || policy == MimoPolicy::kHybC) {
      need(n - 1, n);
      need(n, n);
    }
  }
};

enum class TraceKind : std::uint8_t {
  kTxStart,       // a = frame kind, b = dst id, v = duration_us
  kNavSet,        // v = new nav expiry (ns)
  kBackoffDraw,   // b = cw, v = slots
  kCwChange,      // v = new cw
  kDeliver,       // a = frame kind, b = src id
  kRxDrop,        // a = frame kind, b = src id, v = cause
  kQueueDrop,     // sender gave up after retry limit
};

struct TraceEvent {
  TimeNs t = 0;
  TraceKind kind = TraceKind::kTxStart;
  int node = -1;  // dense index
  int a = 0;
  int b = 0;
  std::int64_t v = 0;
};

namespace detail {

struct Packet {
  std::uint32_t seq = 0;
  TimeNs enqueue_ns = 0;
  std::int64_t payload_bits = 0;
};

enum TimerKind : int {
  kTimerDifs = 1,
  kTimerBackoff,
  kTimerCtsTimeout,
  kTimerAckTimeout,
  kTimerTxDone,
  kTimerResponse,
  kTimerNavClear,
};

enum class XState : std::uint8_t { kIdle, kWaitCts, kDataPending, kWaitAck };

struct Arrival {
  std::uint64_t id = 0;
  Frame frame;
  TimeNs start = 0;
  TimeNs end = 0;
  double frob_w = 0.0;  // Frobenius sum at this receiver
  double ant0_w = 0.0;  // antenna-0 row sum (SISO decoding)
  bool active = false;
  bool locked = false;
};

struct NodeRt {
  int idx = -1;   // dense index
  int id = -1;    // topology node id
  double x = 0.0, y = 0.0;
  int flow_dst_idx = -1;  // dense index of this node's destination, -1 if not a source

  // traffic
  std::deque<Packet> queue;
  std::uint32_t next_seq = 0;
  std::int64_t frames_enqueued = 0;

  // DCF
  XState xstate = XState::kIdle;
  int cw = 31;
  int short_retries = 0;
  int long_retries = 0;
  int backoff_slots = -1;  // -1: next access draws a fresh backoff
  TimeNs backoff_end = 0;
  bool difs_pending = false;
  bool backoff_running = false;
  EventQueue::Handle difs_timer = 0;
  EventQueue::Handle backoff_timer = 0;
  EventQueue::Handle await_timer = 0;
  bool await_pending = false;
  EventQueue::Handle nav_timer = 0;
  bool nav_timer_pending = false;
  TimeNs nav_until = 0;
  std::pair<int, int> nav_pair{-1, -1};

  // pending SIFS response
  bool response_pending = false;
  Frame response_frame;

  // transmit side
  TimeNs tx_until = 0;
  Frame in_flight;
  bool in_flight_valid = false;
  MimoMode negotiated = MimoMode::siso();

  // receiver side
  std::deque<Arrival> arrivals;
  std::uint64_t locked_arrival = 0;  // arrival id, 0 = none
  double ambient_sum_w = 0.0;
  bool cca_busy = false;
  std::map<int, std::uint32_t> delivered_seq;  // per source id

  bool transmitting(TimeNs now) const { return now < tx_until; }
};

}  // namespace detail

class Simulator {
 public:
  Simulator(const SimConfig& cfg, const Topology& topo, std::vector<TraceEvent>* trace)
      : cfg_(cfg),
        topo_(topo),
        trace_(trace),
        collector_(static_cast<int>(topo.nodes.size()), seconds_to_ns(cfg.warmup_s)) {
    cfg_.validate();
    duration_ns_ = seconds_to_ns(cfg_.duration_s);
    ed_w_ = cfg_.phy.ed_threshold_w();
    plcp_ns_ = cfg_.mac.plcp_us * kNsPerUs;

    const int n = static_cast<int>(topo_.nodes.size());
    nodes_.resize(n);
    for (int i = 0; i < n; ++i) {
      nodes_[i].idx = i;
      nodes_[i].id = topo_.nodes[i].id;
      nodes_[i].x = topo_.nodes[i].x;
      nodes_[i].y = topo_.nodes[i].y;
      nodes_[i].cw = cfg_.mac.cw_min;
      id_to_idx_[topo_.nodes[i].id] = i;
    }
    for (const auto& [src, dst] : topo_.pairs) {
      detail::NodeRt& s = nodes_[id_to_idx_.at(src)];
      if (s.flow_dst_idx < 0) {
        s.flow_dst_idx = id_to_idx_.at(dst);
        flow_sources_.push_back(s.idx);
      }
    }
    // Independent substreams keyed by stable node/link ids: new draws in one
    // stream never perturb another.
    backoff_rng_.reserve(n);
    rx_rng_.reserve(n);
    for (int i = 0; i < n; ++i) {
      backoff_rng_.emplace_back(substream_seed(cfg_.seed, 0x6261636bULL, nodes_[i].id));
      rx_rng_.emplace_back(substream_seed(cfg_.seed, 0x72786472ULL, nodes_[i].id));
    }
    link_rng_.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        link_rng_.emplace_back(
            substream_seed(cfg_.seed, 0x6c696e6bULL, nodes_[i].id, nodes_[j].id));
      }
    }
  }

  MetricsReport run() {
    for (int src : flow_sources_) {
      q_.schedule(0, src, EventKind::kAppPacketReady);
    }
    while (auto ev = q_.pop()) {
      if (ev->time > duration_ns_) break;
      dispatch(*ev);
    }
    MetricsReport report =
        collector_.finalize(cfg_.duration_s, cfg_.warmup_s, cfg_.seed, flow_sources_);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      report.per_node[i].node = nodes_[i].id;
    }
    return report;
  }

  // Test hook: frames enqueued at a flow source over the whole run.
  std::int64_t frames_enqueued(int dense_idx) const { return nodes_[dense_idx].frames_enqueued; }

 private:
  // ---- helpers ----------------------------------------------------------

  TimeNs now() const { return q_.now(); }

  void trace(TraceKind k, int node, int a = 0, int b = 0, std::int64_t v = 0) {
    if (trace_) trace_->push_back({now(), k, node, a, b, v});
  }

  double distance(const detail::NodeRt& a, const detail::NodeRt& b) const {
    return std::hypot(a.x - b.x, a.y - b.y);
  }

  bool medium_busy(const detail::NodeRt& s) const {
    return s.cca_busy || s.transmitting(now());
  }

  bool nav_active(const detail::NodeRt& s) const { return now() < s.nav_until; }

  RngStream& link_stream(int src_idx, int dst_idx) {
    return link_rng_[static_cast<std::size_t>(src_idx) * nodes_.size() + dst_idx];
  }

  // ---- traffic -----------------------------------------------------------

  void refill_queue(detail::NodeRt& s) {
    // Saturated source: top the queue up whenever there is room.
    while (s.queue.size() < cfg_.mac.queue_capacity) {
      detail::Packet p;
      p.seq = s.next_seq++;
      p.enqueue_ns = now();
      p.payload_bits = 8LL * cfg_.mac.payload_bytes;
      s.queue.push_back(p);
      ++s.frames_enqueued;
    }
  }

  // ---- contention --------------------------------------------------------

  void cancel_difs(detail::NodeRt& s) {
    if (s.difs_pending) {
      q_.cancel(s.difs_timer);
      s.difs_pending = false;
    }
  }

  void freeze_backoff(detail::NodeRt& s) {
    if (s.backoff_running) {
      q_.cancel(s.backoff_timer);
      s.backoff_running = false;
      const TimeNs slot_ns = cfg_.mac.slot_us * kNsPerUs;
      const TimeNs remaining = s.backoff_end - now();
      s.backoff_slots = remaining <= 0
                            ? 0
                            : static_cast<int>((remaining + slot_ns - 1) / slot_ns);
    }
  }

  void on_medium_busy(detail::NodeRt& s) {
    cancel_difs(s);
    freeze_backoff(s);
  }

  void trigger_access(detail::NodeRt& s) {
    if (s.xstate != detail::XState::kIdle || s.response_pending) return;
    if (s.queue.empty() || s.flow_dst_idx < 0) return;
    if (medium_busy(s) || nav_active(s)) return;
    if (s.difs_pending || s.backoff_running) return;
    s.difs_timer = q_.schedule(now() + cfg_.mac.difs_us * kNsPerUs, s.idx,
                               EventKind::kTimer, 0, detail::kTimerDifs);
    s.difs_pending = true;
  }

  void on_difs_done(detail::NodeRt& s) {
    s.difs_pending = false;
    if (medium_busy(s) || nav_active(s)) return;  // re-armed on the next idle edge
    if (s.backoff_slots < 0) {
      s.backoff_slots = static_cast<int>(backoff_rng_[s.idx].uniform_int(s.cw));
      trace(TraceKind::kBackoffDraw, s.idx, 0, s.cw, s.backoff_slots);
    }
    if (s.backoff_slots == 0) {
      s.backoff_slots = -1;
      send_rts(s);
      return;
    }
    const TimeNs slot_ns = cfg_.mac.slot_us * kNsPerUs;
    s.backoff_end = now() + s.backoff_slots * slot_ns;
    s.backoff_timer =
        q_.schedule(s.backoff_end, s.idx, EventKind::kTimer, 0, detail::kTimerBackoff);
    s.backoff_running = true;
  }

  void on_backoff_done(detail::NodeRt& s) {
    s.backoff_running = false;
    s.backoff_slots = -1;
    if (medium_busy(s) || nav_active(s)) return;
    send_rts(s);
  }

  void send_rts(detail::NodeRt& s) {
    const detail::Packet& pkt = s.queue.front();
    Frame f;
    f.kind = FrameKind::kRts;
    f.src = s.id;
    f.dst = nodes_[s.flow_dst_idx].id;
    f.payload_bits = pkt.payload_bits;
    f.seq = pkt.seq;
    f.retry = s.short_retries > 0 || s.long_retries > 0;
    f.enqueue_ns = pkt.enqueue_ns;
    f.duration_us = duration_field_us(FrameKind::kRts, pkt.payload_bits, cfg_.mac,
                                      cfg_.phy, MimoMode::siso());
    s.xstate = detail::XState::kWaitCts;
    transmit(s, f, MimoMode::siso());
  }

  // ---- transmission ------------------------------------------------------

  void transmit(detail::NodeRt& s, const Frame& frame, const MimoMode& mode) {
    Frame f = frame;
    f.tx_mode = mode;
    f.frame_id = ++next_frame_id_;
    const TimeNs air = frame_airtime_ns(f.kind, f.payload_bits, cfg_.mac, cfg_.phy, mode);

    trace(TraceKind::kTxStart, s.idx, static_cast<int>(f.kind), f.dst, f.duration_us);
    abort_lock(s);  // half duplex: transmitting ruins any ongoing reception
    s.tx_until = now() + air;
    s.in_flight = f;
    s.in_flight_valid = true;
    on_medium_busy(s);

    for (std::size_t r = 0; r < nodes_.size(); ++r) {
      if (static_cast<int>(r) == s.idx) continue;
      detail::NodeRt& rx = nodes_[r];
      const double dist = distance(s, rx);
      const TimeNs prop = propagation_delay_ns(dist);
      const PowerMatrix pm = draw_power_matrix(cfg_.path, dist, mode.m, cfg_.n, s.id,
                                               f.frame_id, link_stream(s.idx, rx.idx));
      detail::Arrival a;
      a.id = ++next_arrival_id_;
      a.frame = f;
      a.start = now() + prop;
      a.end = a.start + air;
      a.frob_w = frobenius_power(pm);
      for (int j = 0; j < pm.n_tx; ++j) a.ant0_w += pm.at(0, j);
      pending_arrivals_.emplace(a.id, a);
      q_.schedule(a.start, rx.idx, EventKind::kArrivalStart, a.id);
      q_.schedule(a.end, rx.idx, EventKind::kArrivalEnd, a.id);
    }
    q_.schedule(s.tx_until, s.idx, EventKind::kTimer, 0, detail::kTimerTxDone);
  }

  void on_tx_done(detail::NodeRt& s) {
    if (!s.in_flight_valid) return;
    const Frame f = s.in_flight;
    s.in_flight_valid = false;
    switch (f.kind) {
      case FrameKind::kRts: {
        const TimeNs cts_air =
            frame_airtime_ns(FrameKind::kCts, 0, cfg_.mac, cfg_.phy, MimoMode::siso());
        arm_await(s, detail::kTimerCtsTimeout,
                  now() + cfg_.mac.sifs_us * kNsPerUs + cts_air +
                      cfg_.mac.timeout_margin_us * kNsPerUs);
        break;
      }
      case FrameKind::kData: {
        const TimeNs ack_air =
            frame_airtime_ns(FrameKind::kAck, 0, cfg_.mac, cfg_.phy, MimoMode::siso());
        s.xstate = detail::XState::kWaitAck;
        arm_await(s, detail::kTimerAckTimeout,
                  now() + cfg_.mac.sifs_us * kNsPerUs + ack_air +
                      cfg_.mac.timeout_margin_us * kNsPerUs);
        break;
      }
      case FrameKind::kCts:
      case FrameKind::kAck:
        break;
    }
    maybe_idle_edge(s);
  }

  void arm_await(detail::NodeRt& s, int timer_kind, TimeNs at) {
    if (s.await_pending) q_.cancel(s.await_timer);
    s.await_timer = q_.schedule(at, s.idx, EventKind::kTimer, 0, timer_kind);
    s.await_pending = true;
  }

  void cancel_await(detail::NodeRt& s) {
    if (s.await_pending) {
      q_.cancel(s.await_timer);
      s.await_pending = false;
    }
  }

  // ---- retries -----------------------------------------------------------

  void handshake_failed(detail::NodeRt& s, bool data_stage) {
    s.xstate = detail::XState::kIdle;
    int& attempts = data_stage ? s.long_retries : s.short_retries;
    const int limit = data_stage ? cfg_.mac.long_retry_limit : cfg_.mac.short_retry_limit;
    ++attempts;
    if (attempts > limit) {
      trace(TraceKind::kQueueDrop, s.idx, 0, 0, s.queue.front().seq);
      collector_.record_drop(s.idx, DropCause::kRetryLimit);
      s.queue.pop_front();
      refill_queue(s);
      s.short_retries = 0;
      s.long_retries = 0;
      s.cw = cfg_.mac.cw_min;
    } else {
      s.cw = next_contention_window(s.cw, cfg_.mac);
    }
    trace(TraceKind::kCwChange, s.idx, 0, 0, s.cw);
    trigger_access(s);
  }

  void handshake_succeeded(detail::NodeRt& s) {
    s.xstate = detail::XState::kIdle;
    s.queue.pop_front();
    refill_queue(s);
    s.short_retries = 0;
    s.long_retries = 0;
    s.cw = cfg_.mac.cw_min;
    trace(TraceKind::kCwChange, s.idx, 0, 0, s.cw);
    trigger_access(s);
  }

  // ---- reception ---------------------------------------------------------

  void abort_lock(detail::NodeRt& s) {
    if (s.locked_arrival == 0) return;
    for (detail::Arrival& a : s.arrivals) {
      if (a.id == s.locked_arrival) {
        a.locked = false;
        break;
      }
    }
    s.locked_arrival = 0;
  }

  void cca_update(detail::NodeRt& s) {
    const bool busy = cca_state(s.ambient_sum_w, cfg_.n, cfg_.phy) == CcaState::kBusy;
    if (busy == s.cca_busy) return;
    s.cca_busy = busy;
    if (busy) {
      on_medium_busy(s);
    } else {
      maybe_idle_edge(s);
    }
  }

  void maybe_idle_edge(detail::NodeRt& s) {
    if (!medium_busy(s)) trigger_access(s);
  }

  void on_arrival_start(detail::NodeRt& s, std::uint64_t arrival_id) {
    auto it = pending_arrivals_.find(arrival_id);
    if (it == pending_arrivals_.end()) return;
    detail::Arrival a = it->second;
    pending_arrivals_.erase(it);
    a.active = true;
    if (!s.transmitting(now()) && s.locked_arrival == 0 &&
        a.frob_w / cfg_.n >= ed_w_) {
      a.locked = true;
      s.locked_arrival = a.id;
    }
    s.ambient_sum_w += a.frob_w;
    s.arrivals.push_back(a);
    cca_update(s);
  }

  void on_arrival_end(detail::NodeRt& s, std::uint64_t arrival_id) {
    detail::Arrival* ap = nullptr;
    for (detail::Arrival& a : s.arrivals) {
      if (a.id == arrival_id) {
        ap = &a;
        break;
      }
    }
    if (!ap) return;
    ap->active = false;
    s.ambient_sum_w -= ap->frob_w;

    const bool was_locked = ap->locked;
    if (s.locked_arrival == arrival_id) s.locked_arrival = 0;

    if (was_locked) {
      decode(s, *ap);
    } else if (ap->frame.kind == FrameKind::kData && ap->frame.dst == s.id) {
      // Addressed DATA that never achieved lock: capture loss or below the
      // detection threshold. It still contributed interference to others.
      collector_.record_drop(id_to_idx_.at(ap->frame.src), DropCause::kChannel);
      trace(TraceKind::kRxDrop, s.idx, static_cast<int>(FrameKind::kData), ap->frame.src, 1);
    }

    // Keep only arrivals that can still overlap a future lock.
    const TimeNs horizon = now() - 2 * max_airtime_ns();
    while (!s.arrivals.empty() && !s.arrivals.front().active &&
           s.arrivals.front().end < horizon) {
      s.arrivals.pop_front();
    }
    cca_update(s);
  }

  TimeNs max_airtime_ns() const {
    return frame_airtime_ns(FrameKind::kData, 8LL * cfg_.mac.payload_bytes, cfg_.mac,
                            cfg_.phy, MimoMode::siso());
  }

  void decode(detail::NodeRt& s, const detail::Arrival& a) {
    // The receive antenna count is the node's own N for every decode; control
    // frames use the single-antenna SISO path.
    MimoMode mode = a.frame.tx_mode;
    if (mode.scheme != MimoScheme::kSiso) mode.n = cfg_.n;

    const bool siso_decode = mode.scheme == MimoScheme::kSiso;
    const double signal_w = siso_decode ? a.ant0_w : a.frob_w;
    std::vector<Overlap> overlaps;
    for (const detail::Arrival& o : s.arrivals) {
      if (o.id == a.id) continue;
      if (o.end <= a.start || o.start >= a.end) continue;
      Overlap ov;
      ov.start = std::max(o.start, a.start);
      ov.end = std::min(o.end, a.end);
      ov.power_sum_w = siso_decode ? o.ant0_w : o.frob_w;
      overlaps.push_back(ov);
    }
    const std::vector<Chunk> chunks =
        chunk_timeline(a.start, a.end, signal_w, overlaps, mode, cfg_.phy, plcp_ns_);
    const double per = packet_error_rate(chunks, mode, cfg_.at);
    if (rx_rng_[s.idx].uniform() < per) {
      if (a.frame.kind == FrameKind::kData && a.frame.dst == s.id) {
        collector_.record_drop(id_to_idx_.at(a.frame.src), DropCause::kChannel);
      }
      trace(TraceKind::kRxDrop, s.idx, static_cast<int>(a.frame.kind), a.frame.src, 0);
      return;
    }
    const double mean_db = linear_to_db(mean_sinr_linear(chunks));
    trace(TraceKind::kDeliver, s.idx, static_cast<int>(a.frame.kind), a.frame.src,
          a.frame.seq);
    mac_receive(s, a.frame, mean_db);
  }

  // ---- MAC receive path ----------------------------------------------------

  void update_nav(detail::NodeRt& s, const Frame& f) {
    const TimeNs cand = now() + static_cast<TimeNs>(f.duration_us) * kNsPerUs;
    const std::pair<int, int> pkey{std::min(f.src, f.dst), std::max(f.src, f.dst)};
    bool changed = false;
    if (pkey == s.nav_pair) {
      // Same exchange that holds our NAV: later frames refresh it exactly,
      // shortening it when the negotiated mode beats the RTS's SISO estimate.
      if (s.nav_until != cand) {
        s.nav_until = cand;
        changed = true;
      }
    } else if (cand > s.nav_until) {
      s.nav_until = cand;
      s.nav_pair = pkey;
      changed = true;
    }
    if (changed) {
      trace(TraceKind::kNavSet, s.idx, 0, 0, s.nav_until);
      if (s.nav_timer_pending) q_.cancel(s.nav_timer);
      s.nav_timer = q_.schedule(s.nav_until, s.idx, EventKind::kTimer, 0,
                                detail::kTimerNavClear);
      s.nav_timer_pending = true;
    }
  }

  MimoMode choose_mode(detail::NodeRt& s, double mean_sinr_db) const {
    (void)s;
    if (!cfg_.is_joint()) return cfg_.fixed_data_mode();
    return select_mimo_mode(mean_sinr_db, cfg_.effective_sinr_min(),
                            cfg_.effective_sinr_max(), cfg_.n);
  }

  void schedule_response(detail::NodeRt& s, const Frame& f) {
    s.response_pending = true;
    s.response_frame = f;
    q_.schedule(now() + cfg_.mac.sifs_us * kNsPerUs, s.idx, EventKind::kTimer, 0,
                detail::kTimerResponse);
  }

  void on_response_timer(detail::NodeRt& s) {
    if (!s.response_pending) return;
    s.response_pending = false;
    const Frame f = s.response_frame;
    // CTS and DATA stay NAV-gated right up to emission; ACKs always go out.
    if ((f.kind == FrameKind::kCts || f.kind == FrameKind::kData) && nav_active(s)) {
      if (f.kind == FrameKind::kData) {
        cancel_await(s);
        handshake_failed(s, true);
      }
      return;
    }
    if (f.kind == FrameKind::kData) {
      s.xstate = detail::XState::kDataPending;
      collector_.record_mode_use(s.idx, mode_to_byte(s.negotiated));
      transmit(s, f, s.negotiated);
    } else {
      transmit(s, f, MimoMode::siso());
    }
  }

  void mac_receive(detail::NodeRt& s, const Frame& f, double mean_sinr_db) {
    if (f.dst != s.id) {
      update_nav(s, f);
      return;
    }
    switch (f.kind) {
      case FrameKind::kRts: {
        if (s.xstate != detail::XState::kIdle || s.response_pending) return;
        if (nav_active(s)) return;  // silent; the sender times out
        const MimoMode mode = choose_mode(s, mean_sinr_db);
        Frame cts;
        cts.kind = FrameKind::kCts;
        cts.src = s.id;
        cts.dst = f.src;
        cts.mode_byte = mode_to_byte(mode);
        cts.payload_bits = f.payload_bits;
        cts.duration_us =
            duration_field_us(FrameKind::kCts, f.payload_bits, cfg_.mac, cfg_.phy, mode);
        schedule_response(s, cts);
        break;
      }
      case FrameKind::kCts: {
        if (s.xstate != detail::XState::kWaitCts) return;
        if (f.src != nodes_[s.flow_dst_idx].id) return;
        cancel_await(s);
        s.negotiated = cfg_.is_joint() ? mode_from_byte(f.mode_byte, cfg_.n)
                                       : cfg_.fixed_data_mode();
        const detail::Packet& pkt = s.queue.front();
        Frame data;
        data.kind = FrameKind::kData;
        data.src = s.id;
        data.dst = f.src;
        data.payload_bits = pkt.payload_bits;
        data.seq = pkt.seq;
        data.retry = s.long_retries > 0;
        data.enqueue_ns = pkt.enqueue_ns;
        data.duration_us = duration_field_us(FrameKind::kData, pkt.payload_bits, cfg_.mac,
                                             cfg_.phy, s.negotiated);
        schedule_response(s, data);
        break;
      }
      case FrameKind::kData: {
        auto it = s.delivered_seq.find(f.src);
        const bool duplicate = it != s.delivered_seq.end() && it->second == f.seq;
        if (!duplicate) {
          s.delivered_seq[f.src] = f.seq;
          collector_.record_delivery(id_to_idx_.at(f.src), f.payload_bits, f.enqueue_ns,
                                     now());
        }
        if (!s.response_pending) {
          Frame ack;
          ack.kind = FrameKind::kAck;
          ack.src = s.id;
          ack.dst = f.src;
          ack.duration_us = 0;
          schedule_response(s, ack);
        }
        break;
      }
      case FrameKind::kAck: {
        if (s.xstate != detail::XState::kWaitAck) return;
        if (f.src != nodes_[s.flow_dst_idx].id) return;
        cancel_await(s);
        handshake_succeeded(s);
        break;
      }
    }
  }

  // ---- event dispatch ------------------------------------------------------

  void dispatch(const Event& ev) {
    detail::NodeRt& s = nodes_[ev.target];
    switch (ev.kind) {
      case EventKind::kAppPacketReady:
        refill_queue(s);
        trigger_access(s);
        break;
      case EventKind::kArrivalStart:
        on_arrival_start(s, ev.payload);
        break;
      case EventKind::kArrivalEnd:
        on_arrival_end(s, ev.payload);
        break;
      case EventKind::kCcaUpdate:
        cca_update(s);
        break;
      case EventKind::kTimer:
        switch (ev.aux) {
          case detail::kTimerDifs: on_difs_done(s); break;
          case detail::kTimerBackoff: on_backoff_done(s); break;
          case detail::kTimerTxDone: on_tx_done(s); break;
          case detail::kTimerResponse: on_response_timer(s); break;
          case detail::kTimerNavClear: trigger_access(s); break;
          case detail::kTimerCtsTimeout:
            if (s.xstate == detail::XState::kWaitCts) {
              s.await_pending = false;
              handshake_failed(s, false);
            }
            break;
          case detail::kTimerAckTimeout:
            if (s.xstate == detail::XState::kWaitAck) {
              s.await_pending = false;
              handshake_failed(s, true);
            }
            break;
          default: break;
        }
        break;
    }
  }

  // ---- members ----------------------------------------------------------

  SimConfig cfg_;
  Topology topo_;
  std::vector<TraceEvent>* trace_ = nullptr;
  MetricsCollector collector_;
  EventQueue q_;
  std::vector<detail::NodeRt> nodes_;
  std::map<int, int> id_to_idx_;
  std::vector<int> flow_sources_;
  std::vector<RngStream> backoff_rng_;
  std::vector<RngStream> rx_rng_;
  std::vector<RngStream> link_rng_;
  std::unordered_map<std::uint64_t, detail::Arrival> pending_arrivals_;
  std::uint64_t next_frame_id_ = 0;
  std::uint64_t next_arrival_id_ = 0;
  TimeNs duration_ns_ = 0;
  double ed_w_ = 0.0;
  TimeNs plcp_ns_ = 0;
};

inline MetricsReport run(const SimConfig& cfg, const Topology& topo,
                         std::vector<TraceEvent>* trace = nullptr) {
  Simulator sim(cfg, topo, trace);
  return sim.run();
}

}  // namespace mimosim

#endif  // MIMOSIM_SIMULATION_HPP
