#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace hedge {

// Step-size sequence gamma_t: either constant, or gamma / t^beta.
struct StepSchedule {
  enum class Kind { constant, power_law };

  Kind kind = Kind::constant;
  double gamma = 0.1;
  double beta = 0.0;  // power_law only, in [0, 1]

  static StepSchedule constant(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("StepSchedule: gamma must be positive");
    return {Kind::constant, gamma, 0.0};
  }

  static StepSchedule power_law(double gamma, double beta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("StepSchedule: gamma must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("StepSchedule: beta must be in [0,1]");
    return {Kind::power_law, gamma, beta};
  }

  double gamma_at(std::size_t t) const {
    if (t == 0) throw std::invalid_argument("StepSchedule: rounds are indexed from t = 1");
    if (kind == Kind::constant) return gamma;
    return gamma / std::pow(static_cast<double>(t), beta);
  }

  bool operator==(const StepSchedule&) const = default;
};

struct ScheduleSums {
  double gamma_t = 0.0;     // step-size used at round t
  double theta_t = 0.0;     // sum_{j<=t} gamma_j
  double gamma_sq_t = 0.0;  // sum_{j<=t} gamma_j^2
};

// Incremental accumulator for (gamma_t, theta_t, sum gamma^2). Compensated
// summation keeps theta accurate over million-step horizons.
class ScheduleAccumulator {
 public:
  explicit ScheduleAccumulator(const StepSchedule& sched) : sched_(sched) {}

  // Advances to the next round and returns its sums.
  ScheduleSums advance() {
    ++t_;
    const double g = sched_.gamma_at(t_);
    add(theta_, theta_c_, g);
    add(gamma_sq_, gamma_sq_c_, g * g);
    return {g, theta_, gamma_sq_};
  }

  std::size_t round() const { return t_; }

 private:
  static void add(double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  StepSchedule sched_;
  std::size_t t_ = 0;
  double theta_ = 0.0, theta_c_ = 0.0;
  double gamma_sq_ = 0.0, gamma_sq_c_ = 0.0;
};

// Sums for a single round t. Constant schedules use the closed form; power
// laws accumulate from the start.
inline ScheduleSums schedule_gamma(const StepSchedule& sched, std::size_t t) {
  if (t == 0) throw std::invalid_argument("schedule_gamma: rounds are indexed from t = 1");
  if (sched.kind == StepSchedule::Kind::constant) {
    const double g = sched.gamma;
    return {g, g * static_cast<double>(t), g * g * static_cast<double>(t)};
  }
  ScheduleAccumulator acc(sched);
  ScheduleSums sums{};
  for (std::size_t j = 0; j < t; ++j) sums = acc.advance();
  return sums;
}

// Full series sum_{t=1}^inf gamma_t^2. Infinite unless the schedule is a
// power law with beta > 1/2. Partial sums run until the increment drops
// below 1e-12 of the total; if the series converges too slowly for that to
// happen within 2e6 terms (beta near 1/2), the remainder is added through an
// Euler-Maclaurin tail, which is accurate to far below the same cutoff.
inline double gamma_squared_total(const StepSchedule& sched) {
  if (sched.kind == StepSchedule::Kind::constant || sched.beta <= 0.5)
    return std::numeric_limits<double>::infinity();
  const double p = 2.0 * sched.beta;  // > 1
  const double g2 = sched.gamma * sched.gamma;
  double sum = 0.0, comp = 0.0;
  const std::size_t cap = 2'000'000;
  std::size_t t = 0;
  while (t < cap) {
    ++t;
    const double term = g2 * std::pow(static_cast<double>(t), -p);
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    if (term < 1e-12 * sum) return sum;
  }
  // Euler-Maclaurin remainder for sum_{t > cap} g2 * t^-p.
  const double a = static_cast<double>(cap) + 1.0;
  const double fa = g2 * std::pow(a, -p);
  const double integral = g2 * std::pow(a, 1.0 - p) / (p - 1.0);
  const double fprime = -p * g2 * std::pow(a, -p - 1.0);
  return sum + integral + 0.5 * fa - fprime / 12.0;
}

}  // namespace hedge
