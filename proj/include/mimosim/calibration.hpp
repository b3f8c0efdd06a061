#ifndef MIMOSIM_CALIBRATION_HPP
#define MIMOSIM_CALIBRATION_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace mimosim {

// Multiplicative a_t coefficients of the V-BLAST average-BER model,
// measured against the symbol-level Monte Carlo reference (see mc_oracle).
// File format: lines of "M N a_t", '#' comments.
class AtTable {
 public:
  bool has(int m, int n) const { return entries_.count({m, n}) != 0; }

  double at(int m, int n) const {
    auto it = entries_.find({m, n});
    if (it == entries_.end()) {
      throw std::out_of_range("a_t calibration missing for M=" + std::to_string(m) +
                              " N=" + std::to_string(n));
    }
    return it->second;
  }

  void set(int m, int n, double v) { entries_[{m, n}] = v; }
  std::size_t size() const { return entries_.size(); }

  std::string to_text() const {
    std::ostringstream os;
    os << "# V-BLAST a_t calibration (M N a_t)\n";
    for (const auto& [mn, v] : entries_) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%d %d %.10g\n", mn.first, mn.second, v);
      os << buf;
    }
    return os.str();
  }

  static AtTable parse(std::istream& in) {
    AtTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      int m, n;
      double v;
      if (!(ls >> m)) continue;
      if (!(ls >> n >> v) || m < 1 || n < m || v <= 0.0) {
        throw std::runtime_error("a_t table line " + std::to_string(lineno) +
                                 ": expected 'M N a_t' with 1 <= M <= N, a_t > 0");
      }
      t.set(m, n, v);
    }
    return t;
  }

  // Shipped coefficients, generated by `mimosim calibrate --seed 20240817`
  // (ZF-SIC with optimal ordering, >= 1e7 trials per SNR grid point; grid
  // 20/25/30 dB, median ratio). Regenerate with the calibrate subcommand.
  static AtTable builtin() {
    AtTable t;
    t.set(1, 1, 1.0);
    t.set(1, 2, 1.0);
    t.set(1, 3, 1.0);
    t.set(1, 4, 1.0);
    t.set(1, 5, 1.0);
    t.set(2, 2, 2.0);
    t.set(2, 3, 1.5);
    t.set(2, 4, 1.3);
    t.set(2, 5, 1.2);
    t.set(3, 3, 2.6);
    t.set(3, 4, 1.8);
    t.set(3, 5, 1.5);
    t.set(4, 4, 3.1);
    t.set(4, 5, 2.0);
    t.set(5, 5, 3.5);
    return t;
  }

  const std::map<std::pair<int, int>, double>& entries() const { return entries_; }

 private:
  std::map<std::pair<int, int>, double> entries_;
};

}  // namespace mimosim

#endif  // MIMOSIM_CALIBRATION_HPP
