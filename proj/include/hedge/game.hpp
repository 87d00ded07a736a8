#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hedge/rng.hpp"

namespace hedge {

// Joint pure-strategy profile: one action index per player.
struct PureProfile {
  std::vector<int> actions;

  bool operator==(const PureProfile&) const = default;
};

// One probability vector per player.
struct MixedProfile {
  std::vector<std::vector<double>> distributions;

  bool operator==(const MixedProfile&) const = default;
};

// Finite N-player normal-form game. Payoffs are stored densely, one row per
// player, indexed by the joint profile in row-major order (player 0's action
// varies slowest).
class Game {
 public:
  Game(std::vector<int> action_counts, std::vector<std::vector<double>> payoffs)
      : action_counts_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
    if (action_counts_.empty()) throw std::invalid_argument("Game: no players");
    std::size_t joint = 1;
    for (int n : action_counts_) {
      if (n < 1) throw std::invalid_argument("Game: action count must be >= 1");
      joint *= static_cast<std::size_t>(n);
    }
    if (payoffs_.size() != action_counts_.size())
      throw std::invalid_argument("Game: one payoff row per player required");
    for (const auto& row : payoffs_) {
      if (row.size() != joint)
        throw std::invalid_argument("Game: payoff row size must equal number of joint profiles");
      for (double u : row) {
        if (!std::isfinite(u)) throw std::invalid_argument("Game: non-finite payoff");
      }
    }
    strides_.assign(action_counts_.size(), 1);
    for (int i = static_cast<int>(action_counts_.size()) - 2; i >= 0; --i)
      strides_[i] = strides_[i + 1] * static_cast<std::size_t>(action_counts_[i + 1]);
    joint_count_ = joint;
  }

  int num_players() const { return static_cast<int>(action_counts_.size()); }
  const std::vector<int>& action_counts() const { return action_counts_; }
  std::size_t num_joint_profiles() const { return joint_count_; }
  const std::vector<std::vector<double>>& payoff_table() const { return payoffs_; }

  std::size_t joint_index(std::span<const int> actions) const {
    if (actions.size() != action_counts_.size())
      throw std::invalid_argument("Game: profile length mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (actions[i] < 0 || actions[i] >= action_counts_[i])
        throw std::invalid_argument("Game: action index out of range");
      idx += static_cast<std::size_t>(actions[i]) * strides_[i];
    }
    return idx;
  }

  double payoff(int player, std::span<const int> actions) const {
    check_player(player);
    return payoffs_[static_cast<std::size_t>(player)][joint_index(actions)];
  }

  double payoff(int player, const PureProfile& s) const { return payoff(player, s.actions); }

  // Largest payoff spread max u_i - min u_i over all players.
  double payoff_spread() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : payoffs_)
      for (double u : row) {
        lo = std::min(lo, u);
        hi = std::max(hi, u);
      }
    return hi - lo;
  }

  double max_abs_payoff() const {
    double m = 0.0;
    for (const auto& row : payoffs_)
      for (double u : row) m = std::max(m, std::abs(u));
    return m;
  }

  bool operator==(const Game& o) const {
    return action_counts_ == o.action_counts_ && payoffs_ == o.payoffs_;
  }

  void check_player(int player) const {
    if (player < 0 || player >= num_players())
      throw std::invalid_argument("Game: player index out of range");
  }

 private:
  std::vector<int> action_counts_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::size_t> strides_;
  std::size_t joint_count_ = 0;
};

// ---- profile validation and construction -----------------------------------

inline void validate_profile(const Game& game, const PureProfile& s) {
  if (static_cast<int>(s.actions.size()) != game.num_players())
    throw std::invalid_argument("PureProfile: wrong number of players");
  for (int i = 0; i < game.num_players(); ++i)
    if (s.actions[i] < 0 || s.actions[i] >= game.action_counts()[i])
      throw std::invalid_argument("PureProfile: action index out of range");
}

inline void validate_mixed(const Game& game, const MixedProfile& x, double tol = 1e-9) {
  if (static_cast<int>(x.distributions.size()) != game.num_players())
    throw std::invalid_argument("MixedProfile: wrong number of players");
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& d = x.distributions[static_cast<std::size_t>(i)];
    if (static_cast<int>(d.size()) != game.action_counts()[i])
      throw std::invalid_argument("MixedProfile: distribution length mismatch");
    double total = 0.0;
    for (double p : d) {
      if (!(p >= 0.0)) throw std::invalid_argument("MixedProfile: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > tol)
      throw std::invalid_argument("MixedProfile: probabilities must sum to 1");
  }
}

inline MixedProfile degenerate_profile(const Game& game, const PureProfile& s) {
  validate_profile(game, s);
  MixedProfile x;
  x.distributions.resize(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    auto& d = x.distributions[static_cast<std::size_t>(i)];
    d.assign(static_cast<std::size_t>(game.action_counts()[i]), 0.0);
    d[static_cast<std::size_t>(s.actions[i])] = 1.0;
  }
  return x;
}

inline MixedProfile uniform_profile(const Game& game) {
  MixedProfile x;
  x.distributions.resize(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    const int n = game.action_counts()[i];
    x.distributions[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n), 1.0 / n);
  }
  return x;
}

// Iterates all joint profiles in row-major order, calling fn(actions, joint_index).
template <typename Fn>
void for_each_joint_profile(const Game& game, Fn&& fn) {
  std::vector<int> s(static_cast<std::size_t>(game.num_players()), 0);
  const auto& counts = game.action_counts();
  std::size_t idx = 0;
  while (true) {
    fn(std::span<const int>(s), idx);
    ++idx;
    int i = game.num_players() - 1;
    while (i >= 0) {
      if (++s[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)]) break;
      s[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

// ---- payoff operations ------------------------------------------------------

// Expected payoff of player i at the mixed profile x: the payoff tensor
// contracted against every player's distribution.
inline double expected_payoff(const Game& game, const MixedProfile& x, int player) {
  game.check_player(player);
  validate_mixed(game, x);
  const auto& row = game.payoff_table()[static_cast<std::size_t>(player)];
  double total = 0.0;
  for_each_joint_profile(game, [&](std::span<const int> s, std::size_t idx) {
    double w = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      w *= x.distributions[j][static_cast<std::size_t>(s[j])];
    total += row[idx] * w;
  });
  return total;
}

// Payoff vector of player i at x: component s is the expected payoff of
// playing pure strategy s against the opponents' part of x.
inline std::vector<double> payoff_vector(const Game& game, const MixedProfile& x, int player) {
  game.check_player(player);
  validate_mixed(game, x);
  const auto& row = game.payoff_table()[static_cast<std::size_t>(player)];
  std::vector<double> v(static_cast<std::size_t>(game.action_counts()[player]), 0.0);
  for_each_joint_profile(game, [&](std::span<const int> s, std::size_t idx) {
    double w = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (static_cast<int>(j) == player) continue;
      w *= x.distributions[j][static_cast<std::size_t>(s[j])];
    }
    v[static_cast<std::size_t>(s[static_cast<std::size_t>(player)])] += row[idx] * w;
  });
  return v;
}

// Payoff vector of player i when the opponents play the pure sub-profile of s.
inline std::vector<double> pure_payoff_vector(const Game& game, const PureProfile& s, int player) {
  game.check_player(player);
  validate_profile(game, s);
  std::vector<int> tmp = s.actions;
  std::vector<double> v(static_cast<std::size_t>(game.action_counts()[player]), 0.0);
  for (int a = 0; a < game.action_counts()[player]; ++a) {
    tmp[static_cast<std::size_t>(player)] = a;
    v[static_cast<std::size_t>(a)] = game.payoff(player, tmp);
  }
  return v;
}

// Concatenated payoff vectors of every player; pairs with (x - x*) under the
// entrywise inner product.
inline std::vector<std::vector<double>> full_payoff_field(const Game& game, const MixedProfile& x) {
  std::vector<std::vector<double>> v;
  v.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) v.push_back(payoff_vector(game, x, i));
  return v;
}

// ---- strict equilibria ------------------------------------------------------

enum class GlobalVerdict { holds_on_samples, violated };

struct GlobalStrictnessResult {
  GlobalVerdict verdict = GlobalVerdict::holds_on_samples;
  std::optional<MixedProfile> witness;  // first violating point, if any
  double worst_slack = 0.0;             // max of <v(x), x-x*> + (a/2)|x-x*|_1 seen
  long points_checked = 0;
};

struct EquilibriumReport {
  std::vector<PureProfile> strict_equilibria;
  std::vector<double> margins;  // per equilibrium: min payoff gap to any unilateral deviation
  std::optional<GlobalStrictnessResult> globally_strict;  // filled on request for a designated equilibrium
};

// Enumerates every pure profile and keeps those where each player's action is
// a strictly unique best response; the margin is the smallest payoff gap over
// all unilateral deviations.
inline EquilibriumReport find_strict_equilibria(const Game& game) {
  EquilibriumReport report;
  for_each_joint_profile(game, [&](std::span<const int> s, std::size_t) {
    double margin = std::numeric_limits<double>::infinity();
    std::vector<int> tmp(s.begin(), s.end());
    for (int i = 0; i < game.num_players(); ++i) {
      const double eq_payoff = game.payoff(i, std::span<const int>(tmp));
      for (int a = 0; a < game.action_counts()[i]; ++a) {
        if (a == s[static_cast<std::size_t>(i)]) continue;
        const int keep = tmp[static_cast<std::size_t>(i)];
        tmp[static_cast<std::size_t>(i)] = a;
        const double gap = eq_payoff - game.payoff(i, std::span<const int>(tmp));
        tmp[static_cast<std::size_t>(i)] = keep;
        margin = std::min(margin, gap);
        if (margin <= 0.0) return;
      }
    }
    if (margin > 0.0) {  // +inf when no player has an alternative action
      report.strict_equilibria.push_back(PureProfile{std::vector<int>(s.begin(), s.end())});
      report.margins.push_back(margin);
    }
  });
  return report;
}

// Margin of a given strict equilibrium; throws if s_star is not strict.
inline double strict_margin(const Game& game, const PureProfile& s_star) {
  validate_profile(game, s_star);
  const auto report = find_strict_equilibria(game);
  for (std::size_t k = 0; k < report.strict_equilibria.size(); ++k)
    if (report.strict_equilibria[k] == s_star) return report.margins[k];
  throw std::invalid_argument("strict_margin: profile is not a strict equilibrium");
}

// True when some player has two actions with exactly equal payoff against a
// fixed opponent profile; such ties make margin-based certification unsound.
inline bool has_best_response_ties(const Game& game) {
  bool tie = false;
  for_each_joint_profile(game, [&](std::span<const int> s, std::size_t) {
    if (tie) return;
    std::vector<int> tmp(s.begin(), s.end());
    for (int i = 0; i < game.num_players() && !tie; ++i) {
      const double base = game.payoff(i, std::span<const int>(tmp));
      for (int a = s[static_cast<std::size_t>(i)] + 1; a < game.action_counts()[i]; ++a) {
        const int keep = tmp[static_cast<std::size_t>(i)];
        tmp[static_cast<std::size_t>(i)] = a;
        if (game.payoff(i, std::span<const int>(tmp)) == base) tie = true;
        tmp[static_cast<std::size_t>(i)] = keep;
      }
    }
  });
  return tie;
}

namespace detail {

inline double l1_gap_to_pure(const MixedProfile& x, const PureProfile& s_star) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.distributions.size(); ++i) {
    const auto& xi = x.distributions[i];
    for (std::size_t a = 0; a < xi.size(); ++a)
      d += std::abs(xi[a] - (static_cast<int>(a) == s_star.actions[i] ? 1.0 : 0.0));
  }
  return d;
}

// <v(x), x - x*> + (a/2) |x - x*|_1; nonpositive wherever the variational
// inequality holds.
inline double variational_slack(const Game& game, const MixedProfile& x, const PureProfile& s_star,
                                double a) {
  double lhs = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto v = payoff_vector(game, x, i);
    const auto& xi = x.distributions[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < v.size(); ++s) {
      const double star = static_cast<int>(s) == s_star.actions[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
      lhs += v[s] * (xi[s] - star);
    }
  }
  return lhs + 0.5 * a * l1_gap_to_pure(x, s_star);
}

}  // namespace detail

// Sampled test of the global variational inequality
//   <v(x), x - x*>  <=  -(a/2) |x - x*|_1   for all x,
// with a = margin(s_star). Deterministic part: for every pure profile s, walk
// the segment from x* to the vertex of s (lambda = 1, 49/50, ..., 1/50), so a
// violation at a far corner is reported at that corner. Random part: `samples`
// uniform draws from the product of simplices.
inline GlobalStrictnessResult check_global_strictness(const Game& game, const PureProfile& s_star,
                                                      long samples, std::uint64_t rng_seed) {
  const double a = strict_margin(game, s_star);  // throws unless s_star is strict
  if (has_best_response_ties(game))
    throw std::invalid_argument("check_global_strictness: game has exact payoff ties");
  constexpr double kTol = 1e-9;
  constexpr int kGrid = 50;
  GlobalStrictnessResult result;

  const auto test_point = [&](const MixedProfile& x) {
    const double slack = detail::variational_slack(game, x, s_star, a);
    ++result.points_checked;
    result.worst_slack = std::max(result.worst_slack, slack);
    if (slack > kTol && !result.witness) {
      result.verdict = GlobalVerdict::violated;
      result.witness = x;
    }
    return slack > kTol;
  };

  bool violated = false;
  for_each_joint_profile(game, [&](std::span<const int> s, std::size_t) {
    if (violated) return;
    bool moves = false;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != s_star.actions[i]) moves = true;
    if (!moves) return;
    for (int k = kGrid; k >= 1 && !violated; --k) {
      const double lambda = static_cast<double>(k) / kGrid;
      MixedProfile x = degenerate_profile(game, s_star);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == s_star.actions[i]) continue;
        auto& xi = x.distributions[i];
        xi[static_cast<std::size_t>(s_star.actions[i])] = 1.0 - lambda;
        xi[static_cast<std::size_t>(s[i])] = lambda;
      }
      violated = test_point(x) || violated;
    }
  });
  if (violated) return result;

  Rng rng(rng_seed);
  for (long n = 0; n < samples; ++n) {
    MixedProfile x;
    x.distributions.reserve(static_cast<std::size_t>(game.num_players()));
    for (int i = 0; i < game.num_players(); ++i)
      x.distributions.push_back(rng.simplex_point(static_cast<std::size_t>(game.action_counts()[i])));
    if (test_point(x)) return result;
  }
  return result;
}

// ---- factories --------------------------------------------------------------

// Canonical 2x2 Prisoner's Dilemma, actions (Cooperate, Defect):
// u(C,C)=(3,3), u(C,D)=(0,5), u(D,C)=(5,0), u(D,D)=(1,1).
inline Game make_prisoners_dilemma() {
  return Game({2, 2}, {{3, 0, 5, 1}, {3, 5, 0, 1}});
}

// 2x2 coordination game: u(A,A)=(2,2), u(B,B)=(1,1), off-diagonal (0,0).
inline Game make_coordination() {
  return Game({2, 2}, {{2, 0, 0, 1}, {2, 0, 0, 1}});
}

// Zero-sum matching pennies; no pure equilibrium.
inline Game make_matching_pennies() {
  return Game({2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
}

// Generic random game: i.i.d. uniform [0,1) payoffs. Ties have probability
// zero, so the game is generic almost surely.
inline Game make_random_game(int num_players, std::vector<int> action_counts, std::uint64_t seed) {
  if (num_players < 1 || static_cast<int>(action_counts.size()) != num_players)
    throw std::invalid_argument("make_random_game: bad dimensions");
  std::size_t joint = 1;
  for (int n : action_counts) {
    if (n < 1) throw std::invalid_argument("make_random_game: action count must be >= 1");
    joint *= static_cast<std::size_t>(n);
  }
  Rng rng(seed);
  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(num_players));
  for (auto& row : payoffs) {
    row.resize(joint);
    for (auto& u : row) u = rng.uniform01();
  }
  return Game(std::move(action_counts), std::move(payoffs));
}

}  // namespace hedge
