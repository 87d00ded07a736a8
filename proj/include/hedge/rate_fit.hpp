#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hedge/basin.hpp"
#include "hedge/divergence.hpp"
#include "hedge/dynamics.hpp"

namespace hedge {

// Regression abscissa for rate fits: cumulative step-size theta_t, the raw
// round index t, or t^p (p = 1 - beta for power-law schedules).
struct Abscissa {
  enum class Kind { theta, step, step_power };

  Kind kind = Kind::theta;
  double exponent = 1.0;  // step_power only

  static Abscissa theta() { return {Kind::theta, 1.0}; }
  static Abscissa step() { return {Kind::step, 1.0}; }
  static Abscissa step_power(double p) { return {Kind::step_power, p}; }

  double value(const Trajectory& traj, std::size_t t) const {
    switch (kind) {
      case Kind::theta: return traj.theta_at(t);
      case Kind::step: return static_cast<double>(t);
      case Kind::step_power: return std::pow(static_cast<double>(t), exponent);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::theta: return "theta_t";
      case Kind::step: return "t";
      case Kind::step_power: return "t_power";
    }
    return "";
  }
};

struct FitWindow {
  std::size_t first = 1;  // inclusive step indices, 1-based
  std::size_t last = 1;
};

struct RateFit {
  double slope = 0.0;      // estimate of -a (against the chosen abscissa)
  double intercept = 0.0;  // log C
  double residual_rms = 0.0;
  FitWindow window{};           // effective window after truncation
  Abscissa abscissa{};
  std::size_t points = 0;
  bool truncated = false;  // window was cut short at an underflowed distance
};

// Ordinary least squares of log |x(t) - x*|_1 against the chosen abscissa
// over the window. Distances below `floor` count as numerical underflow: the
// window is truncated at the first such step and the fit is flagged.
inline RateFit fit_rate(const Trajectory& traj, const PureProfile& s_star, Abscissa abscissa,
                        FitWindow window, double floor = 1e-14) {
  if (window.first < 1 || window.last > traj.num_steps() || window.first > window.last)
    throw std::invalid_argument("fit_rate: empty or out-of-range window");
  if (s_star.actions.size() != static_cast<std::size_t>(traj.num_players()))
    throw std::invalid_argument("fit_rate: profile has wrong number of players");

  std::vector<double> xs, ys;
  xs.reserve(window.last - window.first + 1);
  ys.reserve(xs.capacity());
  bool truncated = false;
  std::size_t effective_last = window.first;
  for (std::size_t t = window.first; t <= window.last; ++t) {
    double d = 0.0;
    for (int i = 0; i < traj.num_players(); ++i) {
      const auto xi = traj.player_mixed_at(t, i);
      for (std::size_t s = 0; s < xi.size(); ++s)
        d += std::abs(xi[s] - (static_cast<int>(s) == s_star.actions[static_cast<std::size_t>(i)] ? 1.0 : 0.0));
    }
    if (d < floor) {
      truncated = true;
      break;
    }
    xs.push_back(abscissa.value(traj, t));
    ys.push_back(std::log(d));
    effective_last = t;
  }
  if (xs.size() < 2)
    throw std::invalid_argument("fit_rate: fewer than two usable points in window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ss += r * r;
  }

  RateFit fit;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.residual_rms = std::sqrt(ss / n);
  fit.window = {window.first, effective_last};
  fit.abscissa = abscissa;
  fit.points = xs.size();
  fit.truncated = truncated;
  return fit;
}

}  // namespace hedge
