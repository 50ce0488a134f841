#pragma once
#include <cmath>
#include <cstdint>

namespace fedlab {

// Counter-based generator: every output is a pure hash of
// (seed, stream, counter), so draws are reproducible regardless of
// evaluation order and streams never overlap.
inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

inline uint64_t counter_hash(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t z = mix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
  return mix64(z ^ (counter + 0x9e3779b97f4a7c15ull * mix64(counter + 1)));
}

class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  uint64_t next_u64() { return counter_hash(seed_, stream_, counter_++); }

  // Uniform on (0,1): never exactly 0 or 1, safe under log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    // Rejection-free 128-bit multiply reduction; bias < 2^-64.
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Fixed stream ids so independent concerns never share a stream.
namespace streams {
constexpr uint64_t dataset = 1;
constexpr uint64_t theta_draws = 2;
constexpr uint64_t monte_carlo = 3;
constexpr uint64_t client_sampling = 4;
constexpr uint64_t sgd_sampling = 5;
constexpr uint64_t probe = 6;
constexpr uint64_t model_init = 7;
}  // namespace streams

}  // namespace fedlab
