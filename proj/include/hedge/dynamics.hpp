#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hedge/feedback.hpp"
#include "hedge/game.hpp"
#include "hedge/logit.hpp"
#include "hedge/rng.hpp"
#include "hedge/schedule.hpp"

namespace hedge {

// Cumulative payoff scores, one vector per player.
struct ScoreState {
  std::vector<std::vector<double>> scores;

  static ScoreState zeros(const Game& game) {
    ScoreState y;
    y.scores.resize(static_cast<std::size_t>(game.num_players()));
    for (int i = 0; i < game.num_players(); ++i)
      y.scores[static_cast<std::size_t>(i)].assign(
          static_cast<std::size_t>(game.action_counts()[i]), 0.0);
    return y;
  }

  // Scores favoring s_star by m0: y_{i,s*} = m0, every other entry 0, so the
  // initial score gaps are exactly -m0.
  static ScoreState near_equilibrium(const Game& game, const PureProfile& s_star, double m0) {
    validate_profile(game, s_star);
    ScoreState y = zeros(game);
    for (int i = 0; i < game.num_players(); ++i)
      y.scores[static_cast<std::size_t>(i)][static_cast<std::size_t>(s_star.actions[i])] = m0;
    return y;
  }

  bool operator==(const ScoreState&) const = default;
};

inline MixedProfile mixed_from_scores(const ScoreState& y) {
  MixedProfile x;
  x.distributions.reserve(y.scores.size());
  for (const auto& yi : y.scores) x.distributions.push_back(logit(yi));
  return x;
}

// Draws an action index from the given distribution. Validates the input,
// then delegates to the generator's inverse-CDF walk.
inline int sample_action(std::span<const double> dist, Rng& rng) {
  if (dist.empty()) throw std::invalid_argument("sample_action: empty distribution");
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw std::invalid_argument("sample_action: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample_action: probabilities must sum to 1");
  return static_cast<int>(rng.categorical(dist));
}

// One update of the score recursion: y_i += gamma_t * vhat_i, then the mixed
// profile is re-derived through the logit map.
inline std::pair<ScoreState, MixedProfile> hedge_step(
    const ScoreState& state, const std::vector<std::vector<double>>& feedback, double gamma_t) {
  if (feedback.size() != state.scores.size())
    throw std::invalid_argument("hedge_step: feedback has wrong number of players");
  ScoreState next = state;
  for (std::size_t i = 0; i < next.scores.size(); ++i) {
    if (feedback[i].size() != next.scores[i].size())
      throw std::invalid_argument("hedge_step: feedback vector length mismatch");
    for (std::size_t s = 0; s < next.scores[i].size(); ++s)
      next.scores[i][s] += gamma_t * feedback[i][s];
  }
  return {std::move(next), mixed_from_scores(next)};
}

struct RunOptions {
  // Subtract each player's max score after every update. The mixed profile
  // and all score gaps are unchanged (shift invariance); raw scores stay
  // bounded over long horizons.
  bool recenter_scores = true;
};

// Full record of one run. Per-step data is stored in flat step-major arrays;
// player i's block within a step starts at offset(i) and has one entry per
// action.
class Trajectory {
 public:
  Trajectory(const Game& game, std::uint64_t seed, bool noisy, std::size_t horizon)
      : action_counts_(game.action_counts()), seed_(seed), noisy_(noisy) {
    offsets_.reserve(action_counts_.size() + 1);
    int total = 0;
    for (int n : action_counts_) {
      offsets_.push_back(total);
      total += n;
    }
    offsets_.push_back(total);
    total_actions_ = static_cast<std::size_t>(total);
    gamma_.reserve(horizon);
    theta_.reserve(horizon);
    scores_.reserve(horizon * total_actions_);
    mixed_.reserve(horizon * total_actions_);
    feedback_.reserve(horizon * total_actions_);
    true_payoffs_.reserve(horizon * total_actions_);
    if (noisy_) drawn_.reserve(horizon * action_counts_.size());
  }

  std::size_t num_steps() const { return gamma_.size(); }
  std::size_t total_actions() const { return total_actions_; }
  int num_players() const { return static_cast<int>(action_counts_.size()); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::uint64_t seed() const { return seed_; }
  bool noisy() const { return noisy_; }
  int offset(int player) const { return offsets_[static_cast<std::size_t>(player)]; }

  double gamma_at(std::size_t t) const { return gamma_[t - 1]; }
  double theta_at(std::size_t t) const { return theta_[t - 1]; }

  // Flat per-step blocks; t runs over 1..num_steps(). t = 0 refers to the
  // initial state, which is only available for scores and mixed profiles.
  std::span<const double> scores_at(std::size_t t) const { return block(scores_, init_scores_, t); }
  std::span<const double> mixed_at(std::size_t t) const { return block(mixed_, init_mixed_, t); }
  std::span<const double> feedback_at(std::size_t t) const { return step_block(feedback_, t); }
  std::span<const double> true_payoffs_at(std::size_t t) const { return step_block(true_payoffs_, t); }

  std::span<const int> drawn_at(std::size_t t) const {
    if (!noisy_) throw std::invalid_argument("Trajectory: no drawn actions under perfect feedback");
    const std::size_t n = action_counts_.size();
    return {drawn_.data() + (t - 1) * n, n};
  }

  std::span<const double> player_mixed_at(std::size_t t, int player) const {
    return mixed_at(t).subspan(static_cast<std::size_t>(offset(player)),
                               static_cast<std::size_t>(action_counts_[static_cast<std::size_t>(player)]));
  }
  std::span<const double> player_scores_at(std::size_t t, int player) const {
    return scores_at(t).subspan(static_cast<std::size_t>(offset(player)),
                                static_cast<std::size_t>(action_counts_[static_cast<std::size_t>(player)]));
  }

  ScoreState scores_state_at(std::size_t t) const { return unflatten_state(scores_at(t)); }
  MixedProfile mixed_profile_at(std::size_t t) const {
    MixedProfile x;
    const auto flat = mixed_at(t);
    x.distributions.reserve(action_counts_.size());
    for (std::size_t i = 0; i < action_counts_.size(); ++i) {
      const auto b = flat.subspan(static_cast<std::size_t>(offsets_[i]),
                                  static_cast<std::size_t>(action_counts_[i]));
      x.distributions.emplace_back(b.begin(), b.end());
    }
    return x;
  }

  void set_initial(const ScoreState& y, const MixedProfile& x) {
    init_scores_ = flatten(y.scores);
    init_mixed_ = flatten(x.distributions);
  }

  void append_step(double gamma, double theta, const ScoreState& y, const MixedProfile& x,
                   const std::vector<std::vector<double>>& vhat,
                   const std::vector<std::vector<double>>& vtrue, std::span<const int> drawn) {
    gamma_.push_back(gamma);
    theta_.push_back(theta);
    append_flat(scores_, y.scores);
    append_flat(mixed_, x.distributions);
    append_flat(feedback_, vhat);
    append_flat(true_payoffs_, vtrue);
    if (noisy_) drawn_.insert(drawn_.end(), drawn.begin(), drawn.end());
  }

 private:
  ScoreState unflatten_state(std::span<const double> flat) const {
    ScoreState y;
    y.scores.reserve(action_counts_.size());
    for (std::size_t i = 0; i < action_counts_.size(); ++i) {
      const auto b = flat.subspan(static_cast<std::size_t>(offsets_[i]),
                                  static_cast<std::size_t>(action_counts_[i]));
      y.scores.emplace_back(b.begin(), b.end());
    }
    return y;
  }

  std::vector<double> flatten(const std::vector<std::vector<double>>& rows) const {
    std::vector<double> out;
    out.reserve(total_actions_);
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
  }

  void append_flat(std::vector<double>& dst, const std::vector<std::vector<double>>& rows) {
    for (const auto& r : rows) dst.insert(dst.end(), r.begin(), r.end());
  }

  std::span<const double> block(const std::vector<double>& arr, const std::vector<double>& init,
                                std::size_t t) const {
    if (t == 0) return {init.data(), init.size()};
    return step_block(arr, t);
  }

  std::span<const double> step_block(const std::vector<double>& arr, std::size_t t) const {
    if (t == 0 || t > num_steps()) throw std::out_of_range("Trajectory: step index out of range");
    return {arr.data() + (t - 1) * total_actions_, total_actions_};
  }

  std::vector<int> action_counts_;
  std::vector<int> offsets_;
  std::size_t total_actions_ = 0;
  std::uint64_t seed_ = 0;
  bool noisy_ = false;

  std::vector<double> init_scores_, init_mixed_;
  std::vector<double> gamma_, theta_;
  std::vector<double> scores_, mixed_, feedback_, true_payoffs_;
  std::vector<int> drawn_;
};

// Plays T rounds of the score recursion. Each round reads gamma_t, draws a
// pure profile under noisy feedback, observes, updates, and records. The run
// is a pure function of (game, init, sched, model, T, seed).
inline Trajectory run_trajectory(const Game& game, const ScoreState& init,
                                 const StepSchedule& sched, const FeedbackModel& model,
                                 std::size_t horizon, std::uint64_t seed,
                                 const RunOptions& opts = {}) {
  if (horizon < 1) throw std::invalid_argument("run_trajectory: horizon must be >= 1");
  if (init.scores.size() != static_cast<std::size_t>(game.num_players()))
    throw std::invalid_argument("run_trajectory: initial scores have wrong number of players");
  for (int i = 0; i < game.num_players(); ++i)
    if (static_cast<int>(init.scores[static_cast<std::size_t>(i)].size()) != game.action_counts()[i])
      throw std::invalid_argument("run_trajectory: initial score vector length mismatch");

  Trajectory traj(game, seed, model.is_noisy(), horizon);
  Rng rng(seed);
  ScheduleAccumulator sched_acc(sched);

  ScoreState y = init;
  MixedProfile x = mixed_from_scores(y);
  traj.set_initial(y, x);

  std::vector<int> drawn(static_cast<std::size_t>(game.num_players()), -1);
  PureProfile profile;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const ScheduleSums sums = sched_acc.advance();
    const auto vtrue = full_payoff_field(game, x);

    std::vector<std::vector<double>> vhat;
    if (model.is_noisy()) {
      for (int i = 0; i < game.num_players(); ++i)
        drawn[static_cast<std::size_t>(i)] =
            sample_action(x.distributions[static_cast<std::size_t>(i)], rng);
      profile.actions = drawn;
      vhat = observe(model, game, x, &profile, rng);
    } else {
      vhat = vtrue;
    }

    for (std::size_t i = 0; i < y.scores.size(); ++i)
      for (std::size_t s = 0; s < y.scores[i].size(); ++s)
        y.scores[i][s] += sums.gamma_t * vhat[i][s];
    if (opts.recenter_scores) {
      for (auto& yi : y.scores) {
        const double m = *std::max_element(yi.begin(), yi.end());
        for (auto& v : yi) v -= m;
      }
    }
    x = mixed_from_scores(y);
    traj.append_step(sums.gamma_t, sums.theta_t, y, x, vhat, vtrue, drawn);
  }
  return traj;
}

}  // namespace hedge
