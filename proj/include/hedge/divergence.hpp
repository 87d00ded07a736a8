#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hedge/dynamics.hpp"
#include "hedge/game.hpp"
#include "hedge/logit.hpp"

namespace hedge {

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: length mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

// L1 distance summed over players.
inline double l1_distance(const MixedProfile& x, const MixedProfile& x_star) {
  if (x.distributions.size() != x_star.distributions.size())
    throw std::invalid_argument("l1_distance: player count mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.distributions.size(); ++i)
    d += l1_distance(x.distributions[i], x_star.distributions[i]);
  return d;
}

// sum_s p_s log p_s with 0 log 0 = 0 (negative entropy).
inline double negative_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h += v * std::log(v);
  return h;
}

// Kullback-Leibler divergence D(x*, x) = sum x* log(x*/x), summed over
// players. Returns +infinity when x puts zero mass where x* does not; the
// divergence genuinely diverges there, so callers get the sentinel rather
// than an error.
inline double kl_divergence(const MixedProfile& x_star, const MixedProfile& x) {
  if (x.distributions.size() != x_star.distributions.size())
    throw std::invalid_argument("kl_divergence: player count mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.distributions.size(); ++i) {
    const auto& p = x_star.distributions[i];
    const auto& q = x.distributions[i];
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (p[s] <= 0.0) continue;
      if (q[s] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[s] * std::log(p[s] / q[s]);
    }
  }
  return d;
}

// Fenchel coupling F(x*, y) = sum_i [ h(x*_i) + logsumexp(y_i) - <y_i, x*_i> ]
// with h the negative entropy. Coincides with D(x*, logit(y)).
inline double fenchel_coupling(const MixedProfile& x_star, const ScoreState& y) {
  if (x_star.distributions.size() != y.scores.size())
    throw std::invalid_argument("fenchel_coupling: player count mismatch");
  double f = 0.0;
  for (std::size_t i = 0; i < y.scores.size(); ++i) {
    const auto& p = x_star.distributions[i];
    const auto& yi = y.scores[i];
    if (p.size() != yi.size()) throw std::invalid_argument("fenchel_coupling: length mismatch");
    double pairing = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) pairing += yi[s] * p[s];
    f += negative_entropy(p) + log_sum_exp(yi) - pairing;
  }
  return f;
}

struct DivergenceRecord {
  double l1 = 0.0;
  double kl = 0.0;
  double fenchel = 0.0;
};

inline DivergenceRecord divergence_record(const MixedProfile& x_star, const MixedProfile& x,
                                          const ScoreState& y) {
  return {l1_distance(x, x_star), kl_divergence(x_star, x), fenchel_coupling(x_star, y)};
}

}  // namespace hedge
