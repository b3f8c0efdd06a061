#ifndef MIMOSIM_RNG_HPP
#define MIMOSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mimosim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent substream seed from a master seed and up to three
// stable keys (node id, link id, purpose tag). Adding new streams keyed
// differently never perturbs existing ones.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t domain,
                                    std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= domain * 0xd1342543de82ef95ULL;
  h ^= splitmix64(s);
  s ^= a * 0xaf251af3b0f025b5ULL;
  h ^= splitmix64(s);
  s ^= b * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  return h;
}

// mt19937_64 plus hand-rolled variate transforms. std:: distributions are not
// bit-stable across standard libraries, so replay-exact simulators roll their
// own (cf. ns-3 RandomVariableStream).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound] by rejection.
  std::uint32_t uniform_int(std::uint32_t bound_inclusive) {
    const std::uint64_t range = static_cast<std::uint64_t>(bound_inclusive) + 1;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % range;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return static_cast<std::uint32_t>(v % range);
  }

  double exponential(double mean = 1.0) {
    return -mean * std::log1p(-uniform());
  }

  // Box-Muller; consumes two uniforms per call, no cached state.
  double normal(double mu = 0.0, double sigma = 1.0) {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mu + sigma * r * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mimosim

#endif  // MIMOSIM_RNG_HPP
