#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hedge/divergence.hpp"
#include "hedge/dynamics.hpp"
#include "hedge/logit.hpp"

namespace hedge {

struct KlStepCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack() const { return rhs - lhs; }
};

// One-step smoothness bound on the KL divergence: with x = logit(y),
//   D(x*, logit(y')) <= D(x*, x) + <y' - y, x - x*> + (1/2) maxnorm(y' - y)^2,
// the max-norm term taken per player and summed.
inline KlStepCheck verify_kl_step(const MixedProfile& x_star, const ScoreState& y,
                                  const ScoreState& y_next, double tol = 1e-9) {
  const MixedProfile x = mixed_from_scores(y);
  const MixedProfile x_next = mixed_from_scores(y_next);
  KlStepCheck check;
  check.lhs = kl_divergence(x_star, x_next);
  double rhs = kl_divergence(x_star, x);
  for (std::size_t i = 0; i < y.scores.size(); ++i) {
    double dual = 0.0;
    for (std::size_t s = 0; s < y.scores[i].size(); ++s) {
      const double dy = y_next.scores[i][s] - y.scores[i][s];
      rhs += dy * (x.distributions[i][s] - x_star.distributions[i][s]);
      dual = std::max(dual, std::abs(dy));
    }
    rhs += 0.5 * dual * dual;
  }
  check.rhs = rhs;
  check.holds = check.lhs <= check.rhs + tol;
  return check;
}

// Max deviation between the central finite-difference gradient of
// logsumexp(y) and logit(y). The gradient identity is exact, so this measures
// only the finite-difference error.
inline double logit_gradient_check(std::span<const double> y, double step = 1e-5) {
  const auto x = logit(y);
  std::vector<double> bumped(y.begin(), y.end());
  double worst = 0.0;
  for (std::size_t s = 0; s < bumped.size(); ++s) {
    const double keep = bumped[s];
    bumped[s] = keep + step;
    const double up = log_sum_exp(bumped);
    bumped[s] = keep - step;
    const double down = log_sum_exp(bumped);
    bumped[s] = keep;
    worst = std::max(worst, std::abs((up - down) / (2.0 * step) - x[s]));
  }
  return worst;
}

}  // namespace hedge
