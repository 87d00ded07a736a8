#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hedge/feedback.hpp"
#include "hedge/game.hpp"
#include "hedge/io.hpp"
#include "hedge/rate_fit.hpp"
#include "hedge/schedule.hpp"

namespace hedge {

// How the experiment's game is obtained.
struct GameSpec {
  enum class Kind { prisoners_dilemma, coordination, matching_pennies, random_generic, inline_game, file };

  Kind kind = Kind::prisoners_dilemma;
  int players = 0;                        // random_generic
  std::vector<int> actions;               // random_generic
  std::uint64_t seed = 0;                 // random_generic
  std::vector<std::vector<double>> payoffs;  // inline_game (actions reused)
  std::string path;                       // file

  Game build() const {
    switch (kind) {
      case Kind::prisoners_dilemma: return make_prisoners_dilemma();
      case Kind::coordination: return make_coordination();
      case Kind::matching_pennies: return make_matching_pennies();
      case Kind::random_generic: return make_random_game(players, actions, seed);
      case Kind::inline_game: return Game(actions, payoffs);
      case Kind::file: return load_game(path);
    }
    throw std::logic_error("GameSpec: unreachable");
  }
};

struct InitSpec {
  enum class Kind { basin, cold_start };

  Kind kind = Kind::basin;
  double m0 = 2.0;  // initial score advantage of the equilibrium action
};

struct OutputSpec {
  std::string dir;  // empty: resolved from HEDGESIM_OUT_DIR, else "./out"
  std::vector<std::string> record = {"trajectory", "series", "ratefit"};
};

struct AnalysisSpec {
  std::optional<FitWindow> fit_window;  // default: [horizon/10 + 1, horizon]
  std::string fit_abscissa = "auto";    // auto | theta_t | t | t_power
  double basin_m = 2.0;
  double confidence_eps = 0.05;
  double convergence_tol = 1e-3;
  std::optional<std::vector<int>> equilibrium;  // designated profile; default: best margin
};

struct ExperimentConfig {
  GameSpec game;
  StepSchedule schedule = StepSchedule::constant(0.1);
  bool noisy_feedback = false;
  std::optional<NoiseSpec> noise;
  InitSpec init;
  std::size_t horizon = 1;
  std::uint64_t seed_first = 0, seed_last = 0;  // inclusive range
  OutputSpec output;
  AnalysisSpec analysis;

  std::size_t num_seeds() const { return static_cast<std::size_t>(seed_last - seed_first + 1); }
};

namespace detail {

inline void require_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed)
      if (key == a) ok = true;
    if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
  }
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* key,
                                     const std::string& where) {
  if (!j.contains(key))
    throw std::invalid_argument("config: missing required field '" + std::string(key) + "' in " + where);
  return j.at(key);
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using nlohmann::json;
  detail::require_keys(j, {"game", "schedule", "feedback", "init", "horizon", "seeds", "output", "analysis"},
                       "top level");
  ExperimentConfig cfg;

  {
    const json& g = detail::require(j, "game", "top level");
    detail::require_keys(g, {"kind", "players", "actions", "seed", "payoffs", "path"}, "game");
    const std::string kind = detail::require(g, "kind", "game").get<std::string>();
    if (kind == "prisoners_dilemma") cfg.game.kind = GameSpec::Kind::prisoners_dilemma;
    else if (kind == "coordination") cfg.game.kind = GameSpec::Kind::coordination;
    else if (kind == "matching_pennies") cfg.game.kind = GameSpec::Kind::matching_pennies;
    else if (kind == "random_generic") {
      cfg.game.kind = GameSpec::Kind::random_generic;
      cfg.game.players = detail::require(g, "players", "game").get<int>();
      cfg.game.actions = detail::require(g, "actions", "game").get<std::vector<int>>();
      cfg.game.seed = detail::require(g, "seed", "game").get<std::uint64_t>();
    } else if (kind == "inline") {
      cfg.game.kind = GameSpec::Kind::inline_game;
      cfg.game.players = detail::require(g, "players", "game").get<int>();
      cfg.game.actions = detail::require(g, "actions", "game").get<std::vector<int>>();
      cfg.game.payoffs = detail::require(g, "payoffs", "game").get<std::vector<std::vector<double>>>();
      if (cfg.game.players != static_cast<int>(cfg.game.actions.size()))
        throw std::invalid_argument("config: game.players does not match game.actions length");
    } else if (kind == "file") {
      cfg.game.kind = GameSpec::Kind::file;
      cfg.game.path = detail::require(g, "path", "game").get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown game.kind '" + kind + "'");
    }
  }

  {
    const json& s = detail::require(j, "schedule", "top level");
    detail::require_keys(s, {"kind", "gamma", "beta"}, "schedule");
    const std::string kind = detail::require(s, "kind", "schedule").get<std::string>();
    const double gamma = detail::require(s, "gamma", "schedule").get<double>();
    if (kind == "constant") cfg.schedule = StepSchedule::constant(gamma);
    else if (kind == "power_law")
      cfg.schedule = StepSchedule::power_law(gamma, detail::require(s, "beta", "schedule").get<double>());
    else throw std::invalid_argument("config: unknown schedule.kind '" + kind + "'");
  }

  {
    const json& f = detail::require(j, "feedback", "top level");
    detail::require_keys(f, {"kind", "noise"}, "feedback");
    const std::string kind = detail::require(f, "kind", "feedback").get<std::string>();
    if (kind == "perfect_mixed") {
      cfg.noisy_feedback = false;
    } else if (kind == "noisy_pure") {
      cfg.noisy_feedback = true;
      const json& n = detail::require(f, "noise", "feedback");
      detail::require_keys(n, {"kind", "sigma", "bound"}, "feedback.noise");
      const std::string nk = detail::require(n, "kind", "feedback.noise").get<std::string>();
      if (nk == "gaussian")
        cfg.noise = NoiseSpec::gaussian(detail::require(n, "sigma", "feedback.noise").get<double>());
      else if (nk == "uniform_bounded")
        cfg.noise = NoiseSpec::uniform_bounded(detail::require(n, "bound", "feedback.noise").get<double>());
      else throw std::invalid_argument("config: unknown noise.kind '" + nk + "'");
    } else {
      throw std::invalid_argument("config: unknown feedback.kind '" + kind + "'");
    }
  }

  if (j.contains("init")) {
    const json& i = j.at("init");
    detail::require_keys(i, {"kind", "m0"}, "init");
    const std::string kind = i.contains("kind") ? i.at("kind").get<std::string>() : "basin";
    if (kind == "basin") cfg.init.kind = InitSpec::Kind::basin;
    else if (kind == "cold_start") cfg.init.kind = InitSpec::Kind::cold_start;
    else throw std::invalid_argument("config: unknown init.kind '" + kind + "'");
    if (i.contains("m0")) cfg.init.m0 = i.at("m0").get<double>();
  }

  cfg.horizon = detail::require(j, "horizon", "top level").get<std::size_t>();
  if (cfg.horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");

  {
    const json& s = detail::require(j, "seeds", "top level");
    if (s.is_number_unsigned() || s.is_number_integer()) {
      cfg.seed_first = cfg.seed_last = s.get<std::uint64_t>();
    } else if (s.is_array() && s.size() == 2) {
      cfg.seed_first = s.at(0).get<std::uint64_t>();
      cfg.seed_last = s.at(1).get<std::uint64_t>();
      if (cfg.seed_last < cfg.seed_first)
        throw std::invalid_argument("config: seeds range must be nonempty");
    } else {
      throw std::invalid_argument("config: seeds must be an integer or [first, last]");
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    detail::require_keys(o, {"dir", "record"}, "output");
    if (o.contains("dir")) cfg.output.dir = o.at("dir").get<std::string>();
    if (o.contains("record")) cfg.output.record = o.at("record").get<std::vector<std::string>>();
    for (const auto& r : cfg.output.record)
      if (r != "trajectory" && r != "series" && r != "ratefit" && r != "noise_ledger")
        throw std::invalid_argument("config: unknown output.record entry '" + r + "'");
  }

  if (j.contains("analysis")) {
    const json& a = j.at("analysis");
    detail::require_keys(a, {"fit_window", "fit_abscissa", "basin_m", "confidence_eps",
                             "convergence_tol", "equilibrium"},
                         "analysis");
    if (a.contains("fit_window")) {
      const auto w = a.at("fit_window").get<std::vector<std::size_t>>();
      if (w.size() != 2) throw std::invalid_argument("config: fit_window must be [first, last]");
      cfg.analysis.fit_window = FitWindow{w[0], w[1]};
    }
    if (a.contains("fit_abscissa")) {
      cfg.analysis.fit_abscissa = a.at("fit_abscissa").get<std::string>();
      const auto& v = cfg.analysis.fit_abscissa;
      if (v != "auto" && v != "theta_t" && v != "t" && v != "t_power")
        throw std::invalid_argument("config: unknown fit_abscissa '" + v + "'");
    }
    if (a.contains("basin_m")) cfg.analysis.basin_m = a.at("basin_m").get<double>();
    if (a.contains("confidence_eps")) cfg.analysis.confidence_eps = a.at("confidence_eps").get<double>();
    if (a.contains("convergence_tol")) cfg.analysis.convergence_tol = a.at("convergence_tol").get<double>();
    if (a.contains("equilibrium"))
      cfg.analysis.equilibrium = a.at("equilibrium").get<std::vector<int>>();
  }

  return cfg;
}

// Canonical serialization: every effective field explicit, keys sorted by the
// JSON library. load followed by save is idempotent on this form.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  switch (cfg.game.kind) {
    case GameSpec::Kind::prisoners_dilemma: j["game"] = {{"kind", "prisoners_dilemma"}}; break;
    case GameSpec::Kind::coordination: j["game"] = {{"kind", "coordination"}}; break;
    case GameSpec::Kind::matching_pennies: j["game"] = {{"kind", "matching_pennies"}}; break;
    case GameSpec::Kind::random_generic:
      j["game"] = {{"kind", "random_generic"},
                   {"players", cfg.game.players},
                   {"actions", cfg.game.actions},
                   {"seed", cfg.game.seed}};
      break;
    case GameSpec::Kind::inline_game:
      j["game"] = {{"kind", "inline"},
                   {"players", static_cast<int>(cfg.game.actions.size())},
                   {"actions", cfg.game.actions},
                   {"payoffs", cfg.game.payoffs}};
      break;
    case GameSpec::Kind::file: j["game"] = {{"kind", "file"}, {"path", cfg.game.path}}; break;
  }
  if (cfg.schedule.kind == StepSchedule::Kind::constant)
    j["schedule"] = {{"kind", "constant"}, {"gamma", cfg.schedule.gamma}};
  else
    j["schedule"] = {{"kind", "power_law"}, {"gamma", cfg.schedule.gamma}, {"beta", cfg.schedule.beta}};
  if (!cfg.noisy_feedback) {
    j["feedback"] = {{"kind", "perfect_mixed"}};
  } else if (cfg.noise->kind == NoiseSpec::Kind::gaussian) {
    j["feedback"] = {{"kind", "noisy_pure"}, {"noise", {{"kind", "gaussian"}, {"sigma", cfg.noise->scale}}}};
  } else {
    j["feedback"] = {{"kind", "noisy_pure"},
                     {"noise", {{"kind", "uniform_bounded"}, {"bound", cfg.noise->scale}}}};
  }
  if (cfg.init.kind == InitSpec::Kind::basin)
    j["init"] = {{"kind", "basin"}, {"m0", cfg.init.m0}};
  else
    j["init"] = {{"kind", "cold_start"}};
  j["horizon"] = cfg.horizon;
  j["seeds"] = {cfg.seed_first, cfg.seed_last};
  j["output"] = {{"dir", cfg.output.dir}, {"record", cfg.output.record}};
  nlohmann::json a;
  if (cfg.analysis.fit_window)
    a["fit_window"] = {cfg.analysis.fit_window->first, cfg.analysis.fit_window->last};
  a["fit_abscissa"] = cfg.analysis.fit_abscissa;
  a["basin_m"] = cfg.analysis.basin_m;
  a["confidence_eps"] = cfg.analysis.confidence_eps;
  a["convergence_tol"] = cfg.analysis.convergence_tol;
  if (cfg.analysis.equilibrium) a["equilibrium"] = *cfg.analysis.equilibrium;
  j["analysis"] = a;
  return j;
}

inline std::string canonical_config_string(const ExperimentConfig& cfg) {
  return config_to_json(cfg).dump(2);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("load_config: " + std::string(e.what()));
  }
  return config_from_json(j);
}

inline void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_config: cannot open " + path);
  out << canonical_config_string(cfg) << "\n";
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(canonical_config_string(cfg));
}

}  // namespace hedge
