#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hedge/dynamics.hpp"
#include "hedge/game.hpp"

namespace hedge {

// Doubles are printed with 17 significant digits so every value round-trips
// exactly through text.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- game files ---------------------------------------------------------
//
// {"players": N, "actions": [S_1,...,S_N], "payoffs": [[u_1(s)...], ...]}
// with each payoff row indexed by the joint profile in row-major order.

inline nlohmann::json game_to_json(const Game& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["actions"] = game.action_counts();
  j["payoffs"] = game.payoff_table();
  return j;
}

inline Game game_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "players" && key != "actions" && key != "payoffs")
      throw std::invalid_argument("game file: unknown key '" + key + "'");
  if (!j.contains("players") || !j.contains("actions") || !j.contains("payoffs"))
    throw std::invalid_argument("game file: requires players, actions, payoffs");
  const int players = j.at("players").get<int>();
  auto actions = j.at("actions").get<std::vector<int>>();
  if (players != static_cast<int>(actions.size()))
    throw std::invalid_argument("game file: players does not match actions length");
  auto payoffs = j.at("payoffs").get<std::vector<std::vector<double>>>();
  return Game(std::move(actions), std::move(payoffs));
}

inline void save_game(const Game& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_game: cannot open " + path);
  out << game_to_json(game).dump(2) << "\n";
}

inline Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_game: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return game_from_json(j);
}

// ---- trajectory CSV -------------------------------------------------------
//
// Header: t,gamma_t,theta_t, then y_<i>_<s> per player/action, then x_<i>_<s>,
// then s_<i> per player (noisy runs only). Row t = 0 carries the initial
// state with gamma = theta = 0 and drawn actions of -1.

inline std::string trajectory_csv_header(const Trajectory& traj) {
  std::ostringstream h;
  h << "t,gamma_t,theta_t";
  for (int i = 0; i < traj.num_players(); ++i)
    for (int s = 0; s < traj.action_counts()[static_cast<std::size_t>(i)]; ++s)
      h << ",y_" << i << "_" << s;
  for (int i = 0; i < traj.num_players(); ++i)
    for (int s = 0; s < traj.action_counts()[static_cast<std::size_t>(i)]; ++s)
      h << ",x_" << i << "_" << s;
  if (traj.noisy())
    for (int i = 0; i < traj.num_players(); ++i) h << ",s_" << i;
  return h.str();
}

inline void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << trajectory_csv_header(traj) << "\n";
  const auto write_row = [&](std::size_t t, double gamma, double theta) {
    out << t << "," << format_double(gamma) << "," << format_double(theta);
    for (double v : traj.scores_at(t)) out << "," << format_double(v);
    for (double v : traj.mixed_at(t)) out << "," << format_double(v);
    if (traj.noisy()) {
      if (t == 0) {
        for (int i = 0; i < traj.num_players(); ++i) out << ",-1";
      } else {
        for (int a : traj.drawn_at(t)) out << "," << a;
      }
    }
    out << "\n";
  };
  write_row(0, 0.0, 0.0);
  for (std::size_t t = 1; t <= traj.num_steps(); ++t)
    write_row(t, traj.gamma_at(t), traj.theta_at(t));
}

inline void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_trajectory_csv: cannot open " + path);
  write_trajectory_csv(traj, out);
}

// Rebuilds a trajectory from its CSV. Feedback and true-payoff columns are
// not part of the file format, so those series come back empty; distances,
// divergences and rate fits are all recoverable.
inline Trajectory load_trajectory_csv(const std::string& path, const Game& game) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trajectory_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_trajectory_csv: empty file");

  const bool noisy = line.find(",s_0") != std::string::npos;
  Trajectory traj(game, 0, noisy, 0);
  {
    std::ostringstream expect;
    Trajectory probe(game, 0, noisy, 0);
    expect << trajectory_csv_header(probe);
    if (line != expect.str())
      throw std::runtime_error("load_trajectory_csv: header does not match game dimensions");
  }

  const int players = game.num_players();
  std::size_t total = 0;
  for (int n : game.action_counts()) total += static_cast<std::size_t>(n);

  bool first_row = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const std::size_t expected = 3 + 2 * total + (noisy ? static_cast<std::size_t>(players) : 0);
    if (cells.size() != expected)
      throw std::runtime_error("load_trajectory_csv: wrong column count");

    const double gamma = std::stod(cells[1]);
    const double theta = std::stod(cells[2]);
    ScoreState y;
    MixedProfile x;
    std::size_t c = 3;
    for (int i = 0; i < players; ++i) {
      std::vector<double> yi(static_cast<std::size_t>(game.action_counts()[i]));
      for (auto& v : yi) v = std::stod(cells[c++]);
      y.scores.push_back(std::move(yi));
    }
    for (int i = 0; i < players; ++i) {
      std::vector<double> xi(static_cast<std::size_t>(game.action_counts()[i]));
      for (auto& v : xi) v = std::stod(cells[c++]);
      x.distributions.push_back(std::move(xi));
    }
    std::vector<int> drawn;
    if (noisy)
      for (int i = 0; i < players; ++i) drawn.push_back(std::stoi(cells[c++]));

    if (first_row) {
      traj.set_initial(y, x);
      first_row = false;
    } else {
      std::vector<std::vector<double>> zeros;
      zeros.reserve(static_cast<std::size_t>(players));
      for (int i = 0; i < players; ++i)
        zeros.emplace_back(static_cast<std::size_t>(game.action_counts()[i]), 0.0);
      traj.append_step(gamma, theta, y, x, zeros, zeros, drawn);
    }
  }
  if (first_row) throw std::runtime_error("load_trajectory_csv: no data rows");
  return traj;
}

}  // namespace hedge
