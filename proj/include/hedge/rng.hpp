#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace hedge {

// Deterministic random source. All draws go through explicit inverse-CDF /
// Box-Muller transforms of raw mt19937_64 output, so a given seed produces
// the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return mean + stddev * r * std::cos(a);
  }

  // Index drawn according to the probability vector (inverse CDF walk).
  std::size_t categorical(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("categorical: empty distribution");
    const double u = uniform01();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return probs.size() - 1;
  }

  // Uniform point on the (n-1)-simplex, i.e. Dirichlet(1,...,1): normalized
  // standard exponentials.
  std::vector<double> simplex_point(std::size_t n) {
    std::vector<double> e(n);
    double total = 0.0;
    for (auto& v : e) {
      v = -std::log(1.0 - uniform01());
      total += v;
    }
    for (auto& v : e) v /= total;
    return e;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hedge
