#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hedge/dynamics.hpp"
#include "hedge/game.hpp"
#include "hedge/schedule.hpp"

namespace hedge {

// Weighted noise martingale per player/action:
//   X_{is}(t) = sum_{j<=t} gamma_j * eta_{is}(j),
// where eta compares the realized feedback against the exact mixed payoff,
// relative to the equilibrium action:
//   eta_{is} = (vhat_{is} - v_{is}(x)) - (vhat_{is*} - v_{is*}(x)).
// The entry at the equilibrium action is identically zero.
class NoiseLedger {
 public:
  NoiseLedger(std::size_t steps, std::size_t total_actions)
      : total_actions_(total_actions), cumulative_(steps * total_actions, 0.0),
        gamma_sq_partial_(steps, 0.0), sup_abs_(total_actions, 0.0) {}

  std::size_t num_steps() const { return gamma_sq_partial_.size(); }
  std::size_t total_actions() const { return total_actions_; }

  std::span<const double> cumulative_at(std::size_t t) const {
    if (t == 0 || t > num_steps()) throw std::out_of_range("NoiseLedger: step out of range");
    return {cumulative_.data() + (t - 1) * total_actions_, total_actions_};
  }
  double gamma_sq_partial_at(std::size_t t) const { return gamma_sq_partial_.at(t - 1); }

  // sup_t |X_{is}(t)| per flat player/action slot.
  const std::vector<double>& sup_abs() const { return sup_abs_; }
  double max_sup_abs() const {
    double m = 0.0;
    for (double v : sup_abs_) m = std::max(m, v);
    return m;
  }

  std::span<double> mutable_step(std::size_t t) {
    return {cumulative_.data() + (t - 1) * total_actions_, total_actions_};
  }
  void set_gamma_sq_partial(std::size_t t, double v) { gamma_sq_partial_[t - 1] = v; }
  void record_sup(std::size_t slot, double x) {
    sup_abs_[slot] = std::max(sup_abs_[slot], std::abs(x));
  }

 private:
  std::size_t total_actions_;
  std::vector<double> cumulative_;
  std::vector<double> gamma_sq_partial_;
  std::vector<double> sup_abs_;
};

// Accumulates the noise martingale along a recorded run. Perfect-feedback
// trajectories yield the all-zero ledger, since feedback equals the true
// payoff field bit for bit.
inline NoiseLedger noise_sums(const Trajectory& traj, const PureProfile& s_star) {
  if (s_star.actions.size() != static_cast<std::size_t>(traj.num_players()))
    throw std::invalid_argument("noise_sums: profile has wrong number of players");
  NoiseLedger ledger(traj.num_steps(), traj.total_actions());
  std::vector<double> running(traj.total_actions(), 0.0);
  double gamma_sq = 0.0;
  for (std::size_t t = 1; t <= traj.num_steps(); ++t) {
    const auto vhat = traj.feedback_at(t);
    const auto vtrue = traj.true_payoffs_at(t);
    const double g = traj.gamma_at(t);
    gamma_sq += g * g;
    for (int i = 0; i < traj.num_players(); ++i) {
      const std::size_t base = static_cast<std::size_t>(traj.offset(i));
      const std::size_t star = base + static_cast<std::size_t>(s_star.actions[static_cast<std::size_t>(i)]);
      const double star_err = vhat[star] - vtrue[star];
      const int count = traj.action_counts()[static_cast<std::size_t>(i)];
      for (int s = 0; s < count; ++s) {
        const std::size_t slot = base + static_cast<std::size_t>(s);
        const double eta = (vhat[slot] - vtrue[slot]) - star_err;
        running[slot] += g * eta;
        ledger.record_sup(slot, running[slot]);
      }
    }
    auto out = ledger.mutable_step(t);
    for (std::size_t k = 0; k < running.size(); ++k) out[k] = running[k];
    ledger.set_gamma_sq_partial(t, gamma_sq);
  }
  return ledger;
}

struct AdmissibilityResult {
  double gamma_sq_total = 0.0;  // sum of gamma_t^2 over the full series
  double threshold = 0.0;       // eps * M^2 / (2 N (S-1) sigma^2)
  bool admissible = false;
};

// Checks the step-size condition for high-probability basin retention at
// confidence eps: the full squared series must satisfy
//   Gamma_2 <= eps * M^2 / (2 N (S - 1) sigma^2),
// with S the largest action count. Constant schedules and power laws with
// beta <= 1/2 have a divergent series and are never admissible.
inline AdmissibilityResult step_size_admissible(const StepSchedule& sched, double eps, double M,
                                                const Game& game, double sigma) {
  if (!(eps > 0.0)) throw std::invalid_argument("step_size_admissible: eps must be positive");
  if (!(M > 0.0)) throw std::invalid_argument("step_size_admissible: M must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("step_size_admissible: sigma must be positive");
  AdmissibilityResult result;
  result.gamma_sq_total = gamma_squared_total(sched);
  int s_max = 0;
  for (int n : game.action_counts()) s_max = std::max(s_max, n);
  const double denom = 2.0 * game.num_players() * (s_max - 1) * sigma * sigma;
  result.threshold = denom > 0.0 ? eps * M * M / denom : std::numeric_limits<double>::infinity();
  result.admissible = result.gamma_sq_total <= result.threshold;
  return result;
}

}  // namespace hedge
