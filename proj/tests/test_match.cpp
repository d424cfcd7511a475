#include <catch2/catch_amalgamated.hpp>

#include "vmcts/envs/gomoku.hpp"
#include "vmcts/envs/tictactoe.hpp"
#include "vmcts/eval/minimax.hpp"
#include "vmcts/eval/rollout.hpp"
#include "vmcts/io.hpp"
#include "vmcts/match.hpp"

using namespace vmcts;

namespace {

EngineConfig small_engine(ExpansionMode mode, int budget = 40, double eps = 0.1) {
  EngineConfig ec;
  ec.mode = mode;
  ec.search.budget = budget;
  ec.vet.epsilon = eps;
  return ec;
}

EvaluatorFn<GomokuState> gomoku_rollout(int rollouts) {
  return RolloutEvaluator<GomokuState>(rollouts);
}

}  // namespace

TEST_CASE("engine modes spend the expected budget") {
  const GomokuState root(7);
  const auto eval = gomoku_rollout(4);

  const SearchOutcome vanilla = engine_move(root, small_engine(ExpansionMode::Vanilla), eval, 3);
  REQUIRE(vanilla.iterations_used == 40);

  const SearchOutcome truncated =
      engine_move(root, small_engine(ExpansionMode::Truncated), eval, 3);
  REQUIRE(truncated.iterations_used == min_budget(0.2, 40));

  const SearchOutcome greedy = engine_move(root, small_engine(ExpansionMode::Greedy), eval, 3);
  REQUIRE(greedy.iterations_used == min_budget(0.2, 40));
  // Greedy piles the remaining budget onto one action.
  double top = 0.0;
  for (double p : greedy.policy.probabilities) top = std::max(top, p);
  REQUIRE(top >= (40.0 - min_budget(0.2, 40)) / 40.0);

  const SearchOutcome adaptive = engine_move(root, small_engine(ExpansionMode::Vmcts), eval, 3);
  REQUIRE(adaptive.iterations_used >= min_budget(0.2, 40));
  REQUIRE(adaptive.iterations_used <= 40);
}

TEST_CASE("perfect players draw tic-tac-toe") {
  const TicTacToeState root;
  const MinimaxEvaluator<TicTacToeState> solver(root);
  const EvaluatorFn<TicTacToeState> eval = [&solver](const TicTacToeState& s, Rng& rng) {
    return solver(s, rng);
  };
  const EngineConfig engine = small_engine(ExpansionMode::Vanilla, 50);
  const GameRecord record = play_game(0, 42, root, engine, engine, eval, eval, true);
  REQUIRE(record.winner == "draw");
  REQUIRE(record.moves == 9);
  REQUIRE(record.budget_a == 50.0);
  REQUIRE(record.budget_b == 50.0);
}

TEST_CASE("match spec validation") {
  MatchSpec spec;
  spec.games = 1;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.games = 3;
  spec.swap_colors = true;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.games = 4;
  REQUIRE_NOTHROW(spec.validate());
  spec.workers = 0;
  REQUIRE_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("matches are deterministic and swap colors fairly") {
  MatchSpec spec;
  spec.games = 6;
  spec.base_seed = 777;

  const GomokuState root(5);
  const auto eval = gomoku_rollout(2);
  const EngineConfig a = small_engine(ExpansionMode::Vmcts, 24);
  const EngineConfig b = small_engine(ExpansionMode::Vanilla, 24);

  const MatchReport r1 = run_match(spec, root, a, b, eval, eval);
  const MatchReport r2 = run_match(spec, root, a, b, eval, eval);
  REQUIRE(r1.games.size() == 6);

  int a_first = 0;
  for (int g = 0; g < 6; ++g) {
    REQUIRE(r1.games[g].game_id == g);
    REQUIRE(r1.games[g].winner == r2.games[g].winner);
    REQUIRE(r1.games[g].moves == r2.games[g].moves);
    REQUIRE(r1.games[g].seed == r2.games[g].seed);
    REQUIRE(r1.games[g].budget_a == r2.games[g].budget_a);
    REQUIRE(r1.games[g].budget_b == r2.games[g].budget_b);
    a_first += r1.games[g].a_plays_first ? 1 : 0;
  }
  REQUIRE(a_first == 3);

  // Same match sharded across workers gives the same rows.
  MatchSpec parallel = spec;
  parallel.workers = 3;
  const MatchReport r3 = run_match(parallel, root, a, b, eval, eval);
  for (int g = 0; g < 6; ++g) {
    REQUIRE(r3.games[g].winner == r1.games[g].winner);
    REQUIRE(r3.games[g].moves == r1.games[g].moves);
  }
}

TEST_CASE("budget accounting: epsilon zero pins the budget to N") {
  MatchSpec spec;
  spec.games = 2;
  spec.base_seed = 5;
  const GomokuState root(5);
  const auto eval = gomoku_rollout(2);
  const EngineConfig a = small_engine(ExpansionMode::Vmcts, 20, 0.0);
  const EngineConfig b = small_engine(ExpansionMode::Vanilla, 20);
  const MatchReport report = run_match(spec, root, a, b, eval, eval);
  for (const auto& g : report.games) {
    REQUIRE(g.budget_a == 20.0);
    REQUIRE(g.budget_b == 20.0);
  }
  REQUIRE(report.aggregates.mean_budget_a == 20.0);
}

TEST_CASE("engine failures become fault rows") {
  MatchSpec spec;
  spec.games = 2;
  const GomokuState root(5);
  const EvaluatorFn<GomokuState> broken = [](const GomokuState&, Rng&) -> Evaluation {
    throw std::runtime_error("evaluator exploded");
  };
  const auto eval = gomoku_rollout(1);
  const MatchReport report = run_match(spec, root, small_engine(ExpansionMode::Vanilla, 10),
                                       small_engine(ExpansionMode::Vanilla, 10), broken, eval);
  REQUIRE(report.aggregates.faults == 2);
  REQUIRE(report.games[0].winner == "fault");
  REQUIRE(report.games[0].fault.find("exploded") != std::string::npos);
}

TEST_CASE("csv layout is stable") {
  MatchReport report;
  GameRecord g;
  g.game_id = 0;
  g.seed = 123;
  g.winner = "A";
  g.moves = 9;
  g.budget_a = 20.0;
  g.budget_b = 19.5;
  g.wall_ms = 1.25;
  report.games.push_back(g);
  const std::string csv = match_csv(report);
  REQUIRE(csv ==
          "game_id,seed,winner,moves,budget_a,budget_b,wall_ms\n"
          "0,123,A,9,20.0000,19.5000,1.250\n");
}

TEST_CASE("match json carries aggregates") {
  MatchSpec spec;
  spec.games = 2;
  const GomokuState root(5);
  const auto eval = gomoku_rollout(1);
  const MatchReport report = run_match(spec, root, small_engine(ExpansionMode::Vanilla, 10),
                                       small_engine(ExpansionMode::Vanilla, 10), eval, eval);
  const Json j = match_json(report);
  REQUIRE(j["games"].size() == 2);
  REQUIRE(j["aggregates"]["win_rate_a"].is_number());
  const double wins = j["aggregates"]["win_rate_a"].get<double>() +
                      j["aggregates"]["win_rate_b"].get<double>() +
                      j["aggregates"]["draw_rate"].get<double>();
  REQUIRE(wins == Catch::Approx(1.0));
}
