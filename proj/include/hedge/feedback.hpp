#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hedge/game.hpp"
#include "hedge/rng.hpp"

namespace hedge {

// Additive observation noise, i.i.d. per payoff component. Both families are
// zero-mean with bounded second moment.
struct NoiseSpec {
  enum class Kind { gaussian, uniform_bounded };

  Kind kind = Kind::gaussian;
  double scale = 1.0;  // standard deviation sigma, or half-width b

  static NoiseSpec gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("NoiseSpec: sigma must be positive");
    return {Kind::gaussian, sigma};
  }
  static NoiseSpec uniform_bounded(double b) {
    if (!(b > 0.0)) throw std::invalid_argument("NoiseSpec: bound must be positive");
    return {Kind::uniform_bounded, b};
  }

  double sample(Rng& rng) const {
    return kind == Kind::gaussian ? rng.normal(0.0, scale) : rng.uniform(-scale, scale);
  }

  bool operator==(const NoiseSpec&) const = default;
};

// Observation channel: either the exact mixed payoff vectors, or the pure
// payoff vectors at the drawn profile plus noise.
class FeedbackModel {
 public:
  enum class Kind { perfect_mixed, noisy_pure };

  static FeedbackModel perfect(const Game& game) {
    FeedbackModel m;
    m.kind_ = Kind::perfect_mixed;
    m.payoff_bound_ = game.max_abs_payoff();
    return m;
  }

  static FeedbackModel noisy(const Game& game, NoiseSpec noise) {
    FeedbackModel m;
    m.kind_ = Kind::noisy_pure;
    m.noise_ = noise;
    m.payoff_bound_ = game.max_abs_payoff() + noise.scale;
    int total = 0;
    for (int n : game.action_counts()) total += n;
    m.total_actions_ = total;
    return m;
  }

  Kind kind() const { return kind_; }
  bool is_noisy() const { return kind_ == Kind::noisy_pure; }
  const std::optional<NoiseSpec>& noise() const { return noise_; }

  // L: max absolute pure payoff plus the noise scale.
  double payoff_bound() const { return payoff_bound_; }

  double noise_scale() const { return noise_ ? noise_->scale : 0.0; }

  // A bound on E[ max-norm(xi)^2 ] for the stacked noise vector: b^2 for
  // bounded noise, sigma^2 times the component count for Gaussian (max of
  // squares is at most their sum in expectation).
  double noise_second_moment_bound() const {
    if (!noise_) return 0.0;
    if (noise_->kind == NoiseSpec::Kind::uniform_bounded) return noise_->scale * noise_->scale;
    return noise_->scale * noise_->scale * static_cast<double>(total_actions_);
  }

 private:
  Kind kind_ = Kind::perfect_mixed;
  std::optional<NoiseSpec> noise_;
  double payoff_bound_ = 0.0;
  int total_actions_ = 0;
};

// One observation per player. Perfect mode returns v_i(x) and ignores s and
// the generator; noisy mode returns v_i(s) + xi with fresh noise per
// component, and requires the drawn profile.
inline std::vector<std::vector<double>> observe(const FeedbackModel& model, const Game& game,
                                                const MixedProfile& x, const PureProfile* s,
                                                Rng& rng) {
  if (model.kind() == FeedbackModel::Kind::perfect_mixed) return full_payoff_field(game, x);
  if (s == nullptr)
    throw std::invalid_argument("observe: noisy feedback requires a drawn pure profile");
  validate_profile(game, *s);
  std::vector<std::vector<double>> vhat;
  vhat.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    auto v = pure_payoff_vector(game, *s, i);
    for (auto& c : v) c += model.noise()->sample(rng);
    vhat.push_back(std::move(v));
  }
  return vhat;
}

}  // namespace hedge
