#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace fermidet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream built on splitmix64.  A trial owns the stream
/// derived from (global seed, trial index), so results do not depend on
/// how trials are scheduled across threads.
class Rng {
public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(splitmix64(seed) ^ splitmix64(0x6a09e667f3bcc909ULL ^ stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::complex<double> complex_normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
  }

  std::vector<std::complex<double>> complex_normal_vector(int n) {
    std::vector<std::complex<double>> v(n);
    for (auto& z : v) z = complex_normal();
    return v;
  }

private:
  std::uint64_t state_;
};

}  // namespace fermidet
