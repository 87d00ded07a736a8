#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hedge/dynamics.hpp"
#include "hedge/game.hpp"

namespace hedge {

// Score gaps relative to an equilibrium profile: z_{is} = y_{is} - y_{i,s*_i}.
// The gap at the equilibrium action is zero by construction, and all gaps are
// invariant under per-player constant shifts of the scores.
inline std::vector<std::vector<double>> score_gaps(const ScoreState& y, const PureProfile& s_star) {
  if (y.scores.size() != s_star.actions.size())
    throw std::invalid_argument("score_gaps: player count mismatch");
  std::vector<std::vector<double>> z = y.scores;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int star = s_star.actions[i];
    if (star < 0 || static_cast<std::size_t>(star) >= z[i].size())
      throw std::invalid_argument("score_gaps: equilibrium action out of range");
    const double base = z[i][static_cast<std::size_t>(star)];
    for (auto& v : z[i]) v -= base;
  }
  return z;
}

// Score-space neighborhood of a pure profile: all gaps at most -threshold.
struct BasinSpec {
  PureProfile equilibrium;
  double threshold = 1.0;  // M > 0

  BasinSpec(PureProfile eq, double m) : equilibrium(std::move(eq)), threshold(m) {
    if (!(m > 0.0)) throw std::invalid_argument("BasinSpec: threshold must be positive");
  }
};

inline bool in_basin(const ScoreState& y, const BasinSpec& basin) {
  const auto z = score_gaps(y, basin.equilibrium);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t s = 0; s < z[i].size(); ++s) {
      if (static_cast<int>(s) == basin.equilibrium.actions[i]) continue;
      if (z[i][s] > -basin.threshold) return false;
    }
  return true;
}

// Largest off-equilibrium gap over all players; the state is inside the
// M-basin exactly when this is <= -M.
inline double max_score_gap(const ScoreState& y, const PureProfile& s_star) {
  const auto z = score_gaps(y, s_star);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t s = 0; s < z[i].size(); ++s) {
      if (static_cast<int>(s) == s_star.actions[i]) continue;
      worst = std::max(worst, z[i][s]);
    }
  return worst;
}

// Every state in the M-basin lies within this L1 distance of the pure
// profile: 2 * sum_i (S_i - 1) * exp(-M).
inline double basin_radius_bound(const Game& game, double threshold) {
  double k = 0.0;
  for (int n : game.action_counts()) k += n - 1;
  return 2.0 * k * std::exp(-threshold);
}

// A basin threshold M such that everywhere in the M-basin, each player's
// payoff gap to the equilibrium action is at least margin - slack. Uses the
// multilinear bound gap(x) >= a - (a + D) * offmass, with offmass at most
// sum_j (S_j - 1) e^{-M} inside the basin and D the payoff spread.
inline double basin_threshold_for_margin(const Game& game, const PureProfile& s_star,
                                         double slack) {
  if (!(slack > 0.0)) throw std::invalid_argument("basin_threshold_for_margin: slack must be positive");
  const double a = strict_margin(game, s_star);
  double k = 0.0;
  for (int n : game.action_counts()) k += n - 1;
  if (k == 0.0) return 1.0;  // no alternative actions anywhere
  return std::log((a + game.payoff_spread()) * k / slack);
}

}  // namespace hedge
