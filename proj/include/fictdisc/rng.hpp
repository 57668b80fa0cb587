#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>

namespace fictdisc {

// Counter-based deterministic RNG (SplitMix64 stream). Streams are derived
// from a seed plus an id path, so e.g. (seed, iteration, trajectory index)
// always yields the same draws regardless of worker count or call order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ kGamma)) {}

  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t s = mix(seed ^ kGamma);
    for (std::uint64_t id : ids) s = mix(s ^ mix(id + kGamma));
    Rng r(0);
    r.state_ = s;
    return r;
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Exponential(1) draw; never returns inf because next_double() < 1.
  double next_exponential() { return -std::log(1.0 - next_double()); }

  // Inverse-CDF draw from a probability vector.
  int next_categorical(const Eigen::VectorXd& probs) {
    const double u = next_double();
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return int(probs.size()) - 1;  // guards accumulated roundoff
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace fictdisc
