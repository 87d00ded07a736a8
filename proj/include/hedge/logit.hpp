#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace hedge {

// log(sum_s exp(y_s)), max-subtracted.
inline double log_sum_exp(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("log_sum_exp: empty vector");
  const double m = *std::max_element(y.begin(), y.end());
  double acc = 0.0;
  for (double v : y) acc += std::exp(v - m);
  return m + std::log(acc);
}

// Softmax of a score vector: (exp(y_s) / sum exp(y_s'))_s. The maximum is
// subtracted before exponentiating so arbitrarily large scores stay finite;
// the result is unchanged because the map is shift invariant.
inline std::vector<double> logit(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("logit: empty score vector");
  for (double v : scores) {
    if (!std::isfinite(v)) throw std::invalid_argument("logit: non-finite score");
  }
  const double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t s = 0; s < scores.size(); ++s) {
    out[s] = std::exp(scores[s] - m);
    total += out[s];
  }
  for (auto& v : out) v /= total;
  return out;
}

}  // namespace hedge
