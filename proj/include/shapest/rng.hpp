#pragma once

#include <cstdint>

namespace shapest {

// splitmix64 step; also used as the stream-key mixer. Counter-based
// substreams keyed by hash(seed, rep, obs) make every draw independent of
// thread count and replication order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (a + 1);
  (void)splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (b + 1);
  (void)splitmix64(s);
  return s;
}

// Deterministic per-observation generator: uniform, normal (Box-Muller)
// and Gamma(shape, 1) (Marsaglia-Tsang) variates from a splitmix64 stream.
class ObsRng {
 public:
  explicit ObsRng(std::uint64_t key) : state_(key) {}

  double uniform() {  // in (0,1)
    const std::uint64_t bits = splitmix64(state_);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();
  double gamma(double shape);  // shape > 0, unit scale
  double chi2(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace shapest
