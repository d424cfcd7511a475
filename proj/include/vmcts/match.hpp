#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "vmcts/virtual_expansion.hpp"

namespace vmcts {

/// How an engine spends its budget. Vmcts terminates adaptively and plays
/// the virtual expanded policy; Vanilla always runs the full budget;
/// Truncated stops at ceil(r*N) and plays the raw visitation policy; Greedy
/// stops at ceil(r*N) and dumps the remainder on the current best action.
enum class ExpansionMode { Vmcts, Vanilla, Truncated, Greedy };

inline std::string to_string(ExpansionMode mode) {
  switch (mode) {
    case ExpansionMode::Vmcts: return "vmcts";
    case ExpansionMode::Vanilla: return "vanilla";
    case ExpansionMode::Truncated: return "truncated";
    case ExpansionMode::Greedy: return "greedy";
  }
  return "?";
}

struct EngineConfig {
  SearchConfig search;
  VetConfig vet;
  ExpansionMode mode = ExpansionMode::Vmcts;
};

template <GameState State>
using EvaluatorFn = std::function<Evaluation(const State&, Rng&)>;

/// One engine decision with a per-move seed.
template <GameState State>
SearchOutcome engine_move(const State& state, const EngineConfig& engine,
                          const EvaluatorFn<State>& evaluator, std::uint64_t seed) {
  SearchConfig cfg = engine.search;
  cfg.seed = seed;
  switch (engine.mode) {
    case ExpansionMode::Vanilla:
      return search_vanilla(state, evaluator, cfg);
    case ExpansionMode::Vmcts:
      return search_vmcts(state, evaluator, cfg, engine.vet);
    case ExpansionMode::Truncated:
      return truncated_vanilla(state, evaluator, cfg, min_budget(engine.vet.min_ratio, cfg.budget));
    case ExpansionMode::Greedy: {
      SearchConfig run_cfg = cfg;
      run_cfg.capture_snapshot = true;
      SearchOutcome out =
          truncated_vanilla(state, evaluator, run_cfg, min_budget(engine.vet.min_ratio, cfg.budget));
      out.policy = greedy_expand(out.snapshot->tree, cfg.budget);
      out.chosen_action = out.policy.argmax_action();
      if (!cfg.capture_snapshot) out.snapshot.reset();
      return out;
    }
  }
  throw std::logic_error("engine_move: bad expansion mode");
}

struct MatchSpec {
  int games = 2;
  bool swap_colors = true;
  std::uint64_t base_seed = 0;
  int workers = 1;

  void validate() const {
    if (games < 2) throw std::invalid_argument("MatchSpec: need at least 2 games");
    if (swap_colors && games % 2 != 0)
      throw std::invalid_argument("MatchSpec: color swap needs an even game count");
    if (workers < 1) throw std::invalid_argument("MatchSpec: workers must be >= 1");
  }
};

struct GameRecord {
  int game_id = 0;
  std::uint64_t seed = 0;
  std::string winner;  // "A", "B", "draw" or "fault"
  int moves = 0;
  double budget_a = 0.0;  // mean iterations per move of engine A
  double budget_b = 0.0;
  double wall_ms = 0.0;
  bool a_plays_first = true;
  std::string fault;
};

struct MatchAggregates {
  double win_rate_a = 0.0;
  double win_rate_b = 0.0;
  double draw_rate = 0.0;
  double win_rate_a_stderr = 0.0;
  double mean_budget_a = 0.0;
  double budget_a_stdev = 0.0;
  double mean_budget_b = 0.0;
  double budget_b_stdev = 0.0;
  double mean_moves = 0.0;
  int faults = 0;
};

struct MatchReport {
  std::vector<GameRecord> games;
  MatchAggregates aggregates;
};

namespace detail {

struct BudgetTally {
  long iterations = 0;
  int moves = 0;
  double mean() const { return moves > 0 ? static_cast<double>(iterations) / moves : 0.0; }
};

}  // namespace detail

/// Plays one game to termination or resignation. `a_plays_first` assigns
/// the first-player seat; per-move search seeds derive from the game seed
/// and the move index.
template <GameState State>
GameRecord play_game(int game_id, std::uint64_t game_seed, const State& initial,
                     const EngineConfig& engine_a, const EngineConfig& engine_b,
                     const EvaluatorFn<State>& eval_a, const EvaluatorFn<State>& eval_b,
                     bool a_plays_first) {
  GameRecord record;
  record.game_id = game_id;
  record.seed = game_seed;
  record.a_plays_first = a_plays_first;

  State state = initial;
  Rng sample_rng(derive_seed(game_seed, 0xfffffffULL));
  detail::BudgetTally tally_a, tally_b;
  int move_index = 0;
  std::string winner;

  while (!state.is_terminal()) {
    const bool first_seat = state.player_to_move() != Player::Second;
    const bool a_turn = first_seat == a_plays_first;
    const EngineConfig& engine = a_turn ? engine_a : engine_b;
    const auto& evaluator = a_turn ? eval_a : eval_b;

    const SearchOutcome out =
        engine_move(state, engine, evaluator, derive_seed(game_seed, move_index));
    detail::BudgetTally& tally = a_turn ? tally_a : tally_b;
    tally.iterations += out.iterations_used;
    tally.moves += 1;

    if (out.resigned) {
      winner = a_turn ? "B" : "A";
      break;
    }
    const Action action =
        sample_action(out.policy, move_index, engine.search.temperature_moves, sample_rng);
    state = state.apply(action);
    ++move_index;
  }

  if (winner.empty()) {
    const double value = state.terminal_value();
    if (value > 0.0) winner = a_plays_first ? "A" : "B";
    else if (value < 0.0) winner = a_plays_first ? "B" : "A";
    else winner = "draw";
  }
  record.winner = winner;
  record.moves = move_index;
  record.budget_a = tally_a.mean();
  record.budget_b = tally_b.mean();
  return record;
}

/// Runs the whole match, optionally across worker threads. Rows come back
/// ordered by game id; the outcome of every game depends only on its derived
/// seed, so the schedule cannot change results.
template <GameState State>
MatchReport run_match(const MatchSpec& spec, const State& initial, const EngineConfig& engine_a,
                      const EngineConfig& engine_b, const EvaluatorFn<State>& eval_a,
                      const EvaluatorFn<State>& eval_b) {
  spec.validate();
  MatchReport report;
  report.games.resize(spec.games);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int game = next.fetch_add(1);
      if (game >= spec.games) return;
      const std::uint64_t seed = derive_seed(spec.base_seed, game);
      const bool a_first = !spec.swap_colors || game % 2 == 0;
      const auto start = std::chrono::steady_clock::now();
      GameRecord record;
      try {
        record = play_game(game, seed, initial, engine_a, engine_b, eval_a, eval_b, a_first);
      } catch (const std::exception& e) {
        record.game_id = game;
        record.seed = seed;
        record.a_plays_first = a_first;
        record.winner = "fault";
        record.fault = e.what();
      }
      record.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
              .count();
      report.games[game] = std::move(record);
    }
  };

  if (spec.workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < spec.workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregates.
  MatchAggregates& agg = report.aggregates;
  double budget_a_sq = 0.0, budget_b_sq = 0.0;
  for (const auto& g : report.games) {
    if (g.winner == "A") agg.win_rate_a += 1.0;
    else if (g.winner == "B") agg.win_rate_b += 1.0;
    else if (g.winner == "draw") agg.draw_rate += 1.0;
    else ++agg.faults;
    agg.mean_budget_a += g.budget_a;
    agg.mean_budget_b += g.budget_b;
    budget_a_sq += g.budget_a * g.budget_a;
    budget_b_sq += g.budget_b * g.budget_b;
    agg.mean_moves += g.moves;
  }
  const double n = spec.games;
  agg.win_rate_a /= n;
  agg.win_rate_b /= n;
  agg.draw_rate /= n;
  agg.win_rate_a_stderr = std::sqrt(agg.win_rate_a * (1.0 - agg.win_rate_a) / n);
  agg.mean_budget_a /= n;
  agg.mean_budget_b /= n;
  agg.budget_a_stdev = std::sqrt(std::max(0.0, budget_a_sq / n - agg.mean_budget_a * agg.mean_budget_a));
  agg.budget_b_stdev = std::sqrt(std::max(0.0, budget_b_sq / n - agg.mean_budget_b * agg.mean_budget_b));
  agg.mean_moves /= n;
  return report;
}

}  // namespace vmcts
