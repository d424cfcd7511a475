#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vmcts/common.hpp"

namespace vmcts {

/// Flat key/value application configuration. Every key can also be set by a
/// command-line flag; flags win over file values. Defaults follow the
/// reference engine setup (c1 = 1.25, c2 = 19652, eps = 0.1, r = 0.2).
struct AppConfig {
  // Environment.
  std::string env = "gomoku";
  int board_size = 0;  // 0 = per-env default
  double komi = 6.5;
  std::string arms = "0.8,0.4,0.3,0.25,0.2";
  std::string reward_law = "uniform";

  // Engine A (the subject engine).
  int n = 150;
  double r = 0.2;
  double eps = 0.1;
  std::string norm = "l1";
  std::string expansion = "vmcts";
  std::string evaluator = "rollout";
  int rollouts = 32;
  double slope = 0.1;
  double c1 = 1.25;
  double c2 = 19652.0;
  double discount = 1.0;
  bool normalize_q = false;
  int check_every = 1;
  bool selfplay = false;
  double dirichlet_alpha = 0.0;  // 0 = per-env default (go 0.03, others 0.3)
  double noise_fraction = 0.25;
  bool resign = true;
  double resign_threshold = -0.9;

  // Engine B (baseline); empty strings inherit from engine A.
  std::string expansion_b = "vanilla";
  std::string evaluator_b;
  int n_b = 0;  // 0 = same as n
  double r_b = -1.0;
  double eps_b = -1.0;
  std::string norm_b;

  // Match / sweep.
  int games = 2;
  bool swap_colors = true;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = ".";

  // Verification.
  double delta = 0.1;
  int trials = 1000;
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw std::invalid_argument("key '" + key + "': expected a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& v, const std::string& key) {
  std::istringstream in(v);
  T out{};
  in >> out;
  if (in.fail() || !in.eof())
    throw std::invalid_argument("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

inline void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw std::invalid_argument("key '" + key + "': " + what);
}

inline void check_choice(const std::string& v, std::initializer_list<const char*> options,
                         const std::string& key) {
  for (const char* o : options)
    if (v == o) return;
  std::string what = "must be one of {";
  for (const char* o : options) what += std::string(o) + " ";
  what.back() = '}';
  throw std::invalid_argument("key '" + key + "': " + what + ", got '" + v + "'");
}

}  // namespace detail

/// Applies one key/value pair with per-key domain validation. Unknown keys
/// are errors.
inline void set_config_key(AppConfig& cfg, const std::string& key, const std::string& value) {
  using detail::check_choice;
  using detail::parse_bool;
  using detail::parse_number;
  using detail::require;

  if (key == "env") {
    check_choice(value, {"tictactoe", "gomoku", "go", "bandit"}, key);
    cfg.env = value;
  } else if (key == "board_size") {
    cfg.board_size = parse_number<int>(value, key);
    require(cfg.board_size == 0 || (cfg.board_size >= 2 && cfg.board_size <= 19), key,
            "board size out of range");
  } else if (key == "komi") {
    cfg.komi = parse_number<double>(value, key);
  } else if (key == "arms") {
    cfg.arms = value;
  } else if (key == "reward_law") {
    check_choice(value, {"bernoulli", "uniform"}, key);
    cfg.reward_law = value;
  } else if (key == "n") {
    cfg.n = parse_number<int>(value, key);
    require(cfg.n >= 2, key, "budget must be >= 2");
  } else if (key == "r") {
    cfg.r = parse_number<double>(value, key);
    require(cfg.r > 0.0 && cfg.r < 1.0, key, "ratio must be in (0,1)");
  } else if (key == "eps") {
    cfg.eps = parse_number<double>(value, key);
    require(cfg.eps >= 0.0, key, "epsilon must be >= 0");
  } else if (key == "norm") {
    check_choice(value, {"l1", "l2"}, key);
    cfg.norm = value;
  } else if (key == "expansion") {
    check_choice(value, {"vmcts", "vanilla", "greedy", "truncated"}, key);
    cfg.expansion = value;
  } else if (key == "evaluator") {
    check_choice(value, {"rollout", "heuristic", "minimax", "bandit"}, key);
    cfg.evaluator = value;
  } else if (key == "rollouts") {
    cfg.rollouts = parse_number<int>(value, key);
    require(cfg.rollouts >= 0, key, "rollouts must be >= 0");
  } else if (key == "slope") {
    cfg.slope = parse_number<double>(value, key);
    require(cfg.slope > 0.0, key, "slope must be positive");
  } else if (key == "c1") {
    cfg.c1 = parse_number<double>(value, key);
    require(cfg.c1 > 0.0, key, "c1 must be positive");
  } else if (key == "c2") {
    cfg.c2 = parse_number<double>(value, key);
    require(cfg.c2 > 0.0, key, "c2 must be positive");
  } else if (key == "discount") {
    cfg.discount = parse_number<double>(value, key);
    require(cfg.discount > 0.0 && cfg.discount <= 1.0, key, "discount must be in (0,1]");
  } else if (key == "normalize_q") {
    cfg.normalize_q = parse_bool(value, key);
  } else if (key == "check_every") {
    cfg.check_every = parse_number<int>(value, key);
    require(cfg.check_every >= 1, key, "check_every must be >= 1");
  } else if (key == "selfplay") {
    cfg.selfplay = parse_bool(value, key);
  } else if (key == "dirichlet_alpha") {
    cfg.dirichlet_alpha = parse_number<double>(value, key);
    require(cfg.dirichlet_alpha >= 0.0, key, "alpha must be >= 0");
  } else if (key == "noise_fraction") {
    cfg.noise_fraction = parse_number<double>(value, key);
    require(cfg.noise_fraction >= 0.0 && cfg.noise_fraction <= 1.0, key,
            "noise fraction must be in [0,1]");
  } else if (key == "resign") {
    cfg.resign = parse_bool(value, key);
  } else if (key == "resign_threshold") {
    cfg.resign_threshold = parse_number<double>(value, key);
    require(cfg.resign_threshold >= -1.0 && cfg.resign_threshold < 0.0, key,
            "resign threshold must be in [-1,0)");
  } else if (key == "expansion_b") {
    check_choice(value, {"vmcts", "vanilla", "greedy", "truncated"}, key);
    cfg.expansion_b = value;
  } else if (key == "evaluator_b") {
    check_choice(value, {"rollout", "heuristic", "minimax", "bandit"}, key);
    cfg.evaluator_b = value;
  } else if (key == "n_b") {
    cfg.n_b = parse_number<int>(value, key);
    require(cfg.n_b >= 0, key, "budget must be >= 0 (0 inherits)");
  } else if (key == "r_b") {
    cfg.r_b = parse_number<double>(value, key);
    require(cfg.r_b > 0.0 && cfg.r_b < 1.0, key, "ratio must be in (0,1)");
  } else if (key == "eps_b") {
    cfg.eps_b = parse_number<double>(value, key);
    require(cfg.eps_b >= 0.0, key, "epsilon must be >= 0");
  } else if (key == "norm_b") {
    check_choice(value, {"l1", "l2"}, key);
    cfg.norm_b = value;
  } else if (key == "games") {
    cfg.games = parse_number<int>(value, key);
    require(cfg.games >= 2, key, "need at least 2 games");
  } else if (key == "swap_colors") {
    cfg.swap_colors = parse_bool(value, key);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(value, key);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(value, key);
    require(cfg.workers >= 1, key, "workers must be >= 1");
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "delta") {
    cfg.delta = parse_number<double>(value, key);
    require(cfg.delta > 0.0 && cfg.delta < 1.0, key, "delta must be in (0,1)");
  } else if (key == "trials") {
    cfg.trials = parse_number<int>(value, key);
    require(cfg.trials >= 100, key, "need at least 100 trials");
  } else {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
}

/// Loads a `key = value` file over the defaults. Blank lines and lines
/// starting with '#' are skipped; malformed lines and unknown keys are
/// reported with their line number.
inline AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  AppConfig cfg;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto sep = stripped.find('=');
    if (sep == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, sep));
    const std::string value = trim(stripped.substr(sep + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    try {
      set_config_key(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

/// Comma-separated doubles, e.g. the bandit arm means.
inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(detail::parse_number<double>(item, "list"));
  return out;
}

}  // namespace vmcts
