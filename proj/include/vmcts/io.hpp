#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "vmcts/match.hpp"
#include "vmcts/outcome.hpp"
#include "vmcts/theory.hpp"

namespace vmcts {

using Json = nlohmann::json;

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline Json nan_to_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace detail

/// Fixed-layout per-game table. Every column except wall_ms is a pure
/// function of the match spec and base seed; wall_ms is a measurement.
inline std::string match_csv(const MatchReport& report) {
  std::string out = "game_id,seed,winner,moves,budget_a,budget_b,wall_ms\n";
  for (const auto& g : report.games) {
    out += std::to_string(g.game_id) + ',' + std::to_string(g.seed) + ',' + g.winner + ',' +
           std::to_string(g.moves) + ',' + detail::fixed(g.budget_a, 4) + ',' +
           detail::fixed(g.budget_b, 4) + ',' + detail::fixed(g.wall_ms, 3) + '\n';
  }
  return out;
}

inline Json match_json(const MatchReport& report) {
  Json games = Json::array();
  for (const auto& g : report.games) {
    Json row{{"game_id", g.game_id}, {"seed", g.seed},         {"winner", g.winner},
             {"moves", g.moves},     {"budget_a", g.budget_a}, {"budget_b", g.budget_b},
             {"wall_ms", g.wall_ms}, {"a_plays_first", g.a_plays_first}};
    if (!g.fault.empty()) row["fault"] = g.fault;
    games.push_back(std::move(row));
  }
  const auto& a = report.aggregates;
  return Json{{"games", std::move(games)},
              {"aggregates",
               {{"win_rate_a", a.win_rate_a},
                {"win_rate_b", a.win_rate_b},
                {"draw_rate", a.draw_rate},
                {"win_rate_a_stderr", a.win_rate_a_stderr},
                {"mean_budget_a", a.mean_budget_a},
                {"budget_a_stdev", a.budget_a_stdev},
                {"mean_budget_b", a.mean_budget_b},
                {"budget_b_stdev", a.budget_b_stdev},
                {"mean_moves", a.mean_moves},
                {"faults", a.faults}}}};
}

inline Json trace_json(const SearchOutcome& outcome, int budget) {
  Json rows = Json::array();
  for (const auto& r : outcome.trace) {
    rows.push_back(Json{{"k", r.iteration},
                        {"delta_l1", detail::nan_to_null(r.delta_l1)},
                        {"delta_l2", detail::nan_to_null(r.delta_l2)},
                        {"virtual_time_ns", r.virtual_time_ns},
                        {"terminated", r.terminated}});
  }
  return Json{{"budget", budget},
              {"iterations_used", outcome.iterations_used},
              {"terminated_early", outcome.terminated_early},
              {"resigned", outcome.resigned},
              {"chosen_action", outcome.chosen_action},
              {"trace", std::move(rows)}};
}

/// Row-major board array of a policy; actions beyond the board (pass) are
/// reported separately.
inline Json board_distribution(const Policy& policy, int board_size) {
  std::vector<double> grid(static_cast<std::size_t>(board_size) * board_size, 0.0);
  double pass = 0.0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    const Action a = policy.support[i];
    if (a >= 0 && a < board_size * board_size) grid[a] = policy.probabilities[i];
    else pass += policy.probabilities[i];
  }
  return Json{{"cells", grid}, {"pass", pass}};
}

inline Json heatmap_json(const std::string& env, int board_size, int budget,
                         const SearchOutcome& outcome, const Policy& oracle) {
  return Json{{"env", env},
              {"board_size", board_size},
              {"budget", budget},
              {"iterations_used", outcome.iterations_used},
              {"terminated_early", outcome.terminated_early},
              {"pi_hat", board_distribution(outcome.policy, board_size)},
              {"pi_oracle", board_distribution(oracle, board_size)}};
}

inline Json theory_json(const TheoryConfig& config, const TheoryReport& report) {
  Json claims = Json::array();
  for (const auto& c : report.claims) {
    claims.push_back(Json{{"claim", c.claim},
                          {"empirical_frequency", c.empirical},
                          {"theoretical_bound", c.bound},
                          {"epsilon_k", c.eps_k},
                          {"epsilon_n", c.eps_n},
                          {"trials", c.trials},
                          {"pass", c.pass},
                          {"conclusive", c.conclusive},
                          {"note", c.note}});
  }
  const auto& a = report.adaptivity;
  return Json{{"config",
               {{"arm_means", config.arms.means},
                {"arm_priors", config.arms.priors},
                {"reward_law", config.arms.law == RewardLaw::Bernoulli ? "bernoulli" : "uniform-bounded"},
                {"budget", config.budget},
                {"ratio", config.min_ratio},
                {"delta", config.delta},
                {"epsilon", config.epsilon},
                {"trials", config.trials},
                {"seed", config.seed}}},
              {"claims", std::move(claims)},
              {"adaptivity",
               {{"mean_easy", a.mean_easy},
                {"mean_hard", a.mean_hard},
                {"sd_easy", a.sd_easy},
                {"sd_hard", a.sd_hard},
                {"trials", a.trials},
                {"z_statistic", a.z_statistic},
                {"p_value", a.p_value}}},
              {"all_pass", report.all_pass()}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace vmcts
