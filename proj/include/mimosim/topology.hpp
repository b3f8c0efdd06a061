#ifndef MIMOSIM_TOPOLOGY_HPP
#define MIMOSIM_TOPOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mimosim/rng.hpp"
#include "mimosim/units.hpp"

namespace mimosim {

enum class ContentionClass : std::uint8_t { kLow, kMedium, kHigh };

inline const char* to_string(ContentionClass c) {
  switch (c) {
    case ContentionClass::kLow: return "LOW";
    case ContentionClass::kMedium: return "MEDIUM";
    case ContentionClass::kHigh: return "HIGH";
  }
  return "?";
}

struct NodePos {
  int id = -1;
  double x = 0.0;
  double y = 0.0;
};

struct Topology {
  double width = 0.0;
  double height = 0.0;
  std::vector<NodePos> nodes;                // ordered by id
  std::vector<std::pair<int, int>> pairs;    // directed (source, destination)
  ContentionClass contention = ContentionClass::kLow;

  int index_of(int id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }

  double distance(int id_a, int id_b) const {
    const NodePos& a = nodes[index_of(id_a)];
    const NodePos& b = nodes[index_of(id_b)];
    return std::hypot(a.x - b.x, a.y - b.y);
  }
};

inline bool operator==(const NodePos& a, const NodePos& b) {
  return a.id == b.id && a.x == b.x && a.y == b.y;
}

inline bool operator==(const Topology& a, const Topology& b) {
  return a.width == b.width && a.height == b.height && a.nodes == b.nodes &&
         a.pairs == b.pairs && a.contention == b.contention;
}

struct SensingDegree {
  std::vector<int> counts;  // per node, same order as topology.nodes
  double mean = 0.0;
};

// Number of nodes within sense_range (Euclidean), excluding self.
inline SensingDegree sensing_degree(const Topology& topo, double sense_range_m) {
  if (sense_range_m <= 0.0) throw std::invalid_argument("sensing_degree: range must be > 0");
  SensingDegree out;
  out.counts.assign(topo.nodes.size(), 0);
  const double r2 = sense_range_m * sense_range_m;
  for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < topo.nodes.size(); ++j) {
      const double dx = topo.nodes[i].x - topo.nodes[j].x;
      const double dy = topo.nodes[i].y - topo.nodes[j].y;
      if (dx * dx + dy * dy <= r2) {
        ++out.counts[i];
        ++out.counts[j];
      }
    }
  }
  long total = 0;
  for (int c : out.counts) total += c;
  out.mean = topo.nodes.empty() ? 0.0 : static_cast<double>(total) / topo.nodes.size();
  return out;
}

// Declared class boundaries on the mean sensing degree at the SISO 225 m range.
inline ContentionClass classify_contention(double mean_degree) {
  if (mean_degree < 6.0) return ContentionClass::kLow;
  if (mean_degree <= 12.0) return ContentionClass::kMedium;
  return ContentionClass::kHigh;
}

constexpr double kSisoSenseRangeM = 225.0;

struct GeneratorResult {
  Topology topology;
  double mean_degree = 0.0;
  bool within_tolerance = false;  // achieved degree within +/-20% of target
  int attempts = 0;
};

namespace detail {

// One placement draw: pair anchors uniform in a centered square of side
// `spread`, partners at distance uniform in [0.6, 1.0] * max_pair of the
// anchor. Shrinking the spread raises the sensing density.
inline Topology place_pairs(int n_nodes, double terrain_m, double max_pair_m,
                            double spread, RngStream& rng) {
  Topology topo;
  topo.width = terrain_m;
  topo.height = terrain_m;
  const double lo = (terrain_m - spread) / 2.0;
  const int n_pairs = n_nodes / 2;
  for (int p = 0; p < n_pairs; ++p) {
    const int a = 2 * p;
    const int b = 2 * p + 1;
    double ax, ay, bx, by;
    for (;;) {
      ax = lo + rng.uniform() * spread;
      ay = lo + rng.uniform() * spread;
      const double d = max_pair_m * (0.6 + 0.4 * rng.uniform());
      const double theta = rng.uniform() * 2.0 * 3.141592653589793;
      bx = ax + d * std::cos(theta);
      by = ay + d * std::sin(theta);
      if (bx >= 0.0 && bx <= terrain_m && by >= 0.0 && by <= terrain_m) break;
    }
    topo.nodes.push_back({a, ax, ay});
    topo.nodes.push_back({b, bx, by});
    topo.pairs.emplace_back(a, b);
    topo.pairs.emplace_back(b, a);
  }
  return topo;
}

}  // namespace detail

// Rejection-style generator: redraws layouts while steering the anchor spread
// until the mean sensing degree lands within +/-20% of the target, or returns
// the best effort after the retry budget.
inline GeneratorResult generate_topology(int n_nodes, double terrain_m,
                                         double max_pair_m, double target_degree,
                                         std::uint64_t seed,
                                         double sense_range_m = kSisoSenseRangeM,
                                         int max_attempts = 48) {
  if (n_nodes % 2 != 0) throw std::invalid_argument("generate_topology: n_nodes must be even");
  if (n_nodes < 0) throw std::invalid_argument("generate_topology: n_nodes must be >= 0");
  if (max_pair_m <= 0.0) throw std::invalid_argument("generate_topology: max_pair_distance must be > 0");
  if (terrain_m < max_pair_m) throw std::invalid_argument("generate_topology: terrain too small for pair distance");

  RngStream rng(substream_seed(seed, /*domain=*/0x746f706fULL));
  GeneratorResult best;
  best.mean_degree = -1.0;

  const double min_spread = std::min(2.0 * max_pair_m, terrain_m);
  double spread = terrain_m;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Topology topo = detail::place_pairs(n_nodes, terrain_m, max_pair_m, spread, rng);
    const double mean = sensing_degree(topo, sense_range_m).mean;
    // The class label is always taken at the SISO 225 m range, whatever range
    // steered the density.
    topo.contention = classify_contention(
        sense_range_m == kSisoSenseRangeM ? mean
                                          : sensing_degree(topo, kSisoSenseRangeM).mean);

    const bool ok = target_degree <= 0.0 ||
                    std::abs(mean - target_degree) <= 0.2 * target_degree;
    if (best.mean_degree < 0.0 ||
        std::abs(mean - target_degree) < std::abs(best.mean_degree - target_degree)) {
      best.topology = std::move(topo);
      best.mean_degree = mean;
      best.within_tolerance = ok;
    }
    best.attempts = attempt + 1;
    if (ok) break;

    // Degree scales roughly with node density ~ 1/spread^2.
    if (mean > 0.0 && target_degree > 0.0) {
      spread *= std::sqrt(mean / target_degree);
    } else if (mean <= 0.0) {
      spread *= 0.5;
    }
    spread = std::clamp(spread, min_spread, terrain_m);
  }
  return best;
}

// ---- persistence ------------------------------------------------------
//
// Line-oriented text:
//   terrain W H
//   node ID X Y
//   pair SRC DST
// '#' starts a comment; coordinates are decimal meters.

struct TopologyParseError : std::runtime_error {
  explicit TopologyParseError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string format_topology(const Topology& topo) {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "terrain %.17g %.17g\n", topo.width, topo.height);
  os << buf;
  for (const NodePos& n : topo.nodes) {
    std::snprintf(buf, sizeof buf, "node %d %.17g %.17g\n", n.id, n.x, n.y);
    os << buf;
  }
  for (const auto& [s, d] : topo.pairs) {
    os << "pair " << s << ' ' << d << '\n';
  }
  return os.str();
}

inline Topology parse_topology(std::istream& in) {
  Topology topo;
  bool have_terrain = false;
  std::map<int, int> src_count, dst_count;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw TopologyParseError("topology line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "terrain") {
      if (!(ls >> topo.width >> topo.height)) fail("expected 'terrain W H'");
      if (topo.width <= 0 || topo.height <= 0) fail("terrain dimensions must be positive");
      have_terrain = true;
    } else if (tag == "node") {
      NodePos n;
      if (!(ls >> n.id >> n.x >> n.y)) fail("expected 'node ID X Y'");
      if (!have_terrain) fail("node before terrain header");
      if (n.x < 0 || n.x > topo.width || n.y < 0 || n.y > topo.height) {
        fail("node " + std::to_string(n.id) + " outside terrain bounds");
      }
      for (const NodePos& other : topo.nodes) {
        if (other.id == n.id) fail("duplicate node id " + std::to_string(n.id));
      }
      topo.nodes.push_back(n);
    } else if (tag == "pair") {
      int s, d;
      if (!(ls >> s >> d)) fail("expected 'pair SRC DST'");
      if (topo.index_of(s) < 0) fail("pair source " + std::to_string(s) + " is not a node");
      if (topo.index_of(d) < 0) fail("pair destination " + std::to_string(d) + " is not a node");
      if (s == d) fail("pair source equals destination");
      if (++src_count[s] > 1) fail("node " + std::to_string(s) + " is a source in two pairs");
      if (++dst_count[d] > 1) fail("node " + std::to_string(d) + " is a destination in two pairs");
      topo.pairs.emplace_back(s, d);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!have_terrain && !topo.nodes.empty()) {
    throw TopologyParseError("topology: missing terrain header");
  }
  const SensingDegree deg = sensing_degree(topo, kSisoSenseRangeM);
  topo.contention = classify_contention(deg.mean);
  return topo;
}

inline void save_topology(const Topology& topo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file: " + path);
  out << format_topology(topo);
}

inline Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read topology file: " + path);
  try {
    return parse_topology(in);
  } catch (const TopologyParseError& e) {
    throw TopologyParseError(path + ": " + e.what());
  }
}

}  // namespace mimosim

#endif  // MIMOSIM_TOPOLOGY_HPP
