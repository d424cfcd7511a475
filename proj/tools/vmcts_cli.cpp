// Command-line harness: single-search tracing with heatmap export,
// engine-vs-engine matches, hyperparameter sweeps, statistical verification
// of the termination rule's guarantees, and a text-mode play loop.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "vmcts/config_file.hpp"
#include "vmcts/envs/bandit.hpp"
#include "vmcts/envs/go.hpp"
#include "vmcts/envs/gomoku.hpp"
#include "vmcts/envs/tictactoe.hpp"
#include "vmcts/eval/bandit.hpp"
#include "vmcts/eval/go_heuristic.hpp"
#include "vmcts/eval/minimax.hpp"
#include "vmcts/eval/rollout.hpp"
#include "vmcts/io.hpp"
#include "vmcts/match.hpp"
#include "vmcts/theory.hpp"

namespace fs = std::filesystem;
using namespace vmcts;

namespace {

int log_level() {
  const char* v = std::getenv("VMCTS_LOG");
  return v ? std::atoi(v) : 0;
}

Norm parse_norm(const std::string& name) { return name == "l2" ? Norm::L2 : Norm::L1; }

ExpansionMode parse_mode(const std::string& name) {
  if (name == "vanilla") return ExpansionMode::Vanilla;
  if (name == "greedy") return ExpansionMode::Greedy;
  if (name == "truncated") return ExpansionMode::Truncated;
  return ExpansionMode::Vmcts;
}

RewardLaw parse_law(const std::string& name) {
  return name == "bernoulli" ? RewardLaw::Bernoulli : RewardLaw::UniformBounded;
}

struct EnvInfo {
  int board_size = 0;  // 0 for non-board environments
  bool two_player = true;
  int typical_branching = 0;
  double default_alpha = 0.3;
};

BanditArms arms_from_config(const AppConfig& cfg) {
  return BanditArms::make(parse_double_list(cfg.arms), parse_law(cfg.reward_law));
}

// Engine A uses the primary keys, engine B falls back to them where no _b
// override was given.
EngineConfig make_engine(const AppConfig& cfg, const EnvInfo& env, bool engine_b) {
  EngineConfig engine;
  SearchConfig& s = engine.search;
  s.budget = engine_b && cfg.n_b > 0 ? cfg.n_b : cfg.n;
  s.c1 = cfg.c1;
  s.c2 = cfg.c2;
  s.discount = cfg.discount;
  s.two_player = env.two_player;
  s.normalize_q = cfg.normalize_q;
  s.dirichlet_alpha = cfg.dirichlet_alpha > 0.0 ? cfg.dirichlet_alpha : env.default_alpha;
  s.noise_fraction = cfg.noise_fraction;
  s.reference_branching = env.typical_branching;
  if (cfg.selfplay) {
    s.add_noise = true;
    s.temperature_moves = 16;
  }
  if (cfg.resign && env.two_player) s.resign_threshold = cfg.resign_threshold;

  engine.vet.min_ratio = engine_b && cfg.r_b > 0.0 ? cfg.r_b : cfg.r;
  engine.vet.epsilon = engine_b && cfg.eps_b >= 0.0 ? cfg.eps_b : cfg.eps;
  engine.vet.norm = parse_norm(engine_b && !cfg.norm_b.empty() ? cfg.norm_b : cfg.norm);
  engine.vet.check_every = cfg.check_every;
  engine.mode = parse_mode(engine_b ? cfg.expansion_b : cfg.expansion);
  return engine;
}

template <GameState State>
EvaluatorFn<State> make_evaluator(const AppConfig& cfg, const std::string& kind,
                                  const State& root) {
  if (kind == "rollout") {
    if constexpr (std::is_same_v<State, BanditState>) {
      throw std::invalid_argument("the bandit environment needs --evaluator bandit");
    } else {
      return RolloutEvaluator<State>(cfg.rollouts);
    }
  }
  if (kind == "minimax") {
    if constexpr (requires(const State& s) { s.to_text(); }) {
      auto solver = std::make_shared<MinimaxEvaluator<State>>(root);
      return [solver](const State& s, Rng& rng) { return (*solver)(s, rng); };
    } else {
      throw std::invalid_argument("--evaluator minimax needs a board environment");
    }
  }
  if (kind == "heuristic") {
    if constexpr (std::is_same_v<State, GoState>) {
      return GoHeuristicEvaluator(cfg.slope);
    } else {
      throw std::invalid_argument("--evaluator heuristic is only available for go");
    }
  }
  if (kind == "bandit") {
    if constexpr (std::is_same_v<State, BanditState>) {
      return BanditEvaluator{};
    } else {
      throw std::invalid_argument("--evaluator bandit is only available for the bandit env");
    }
  }
  throw std::invalid_argument("unknown evaluator: " + kind);
}

// Runs `fn(initial_state, env_info)` with the environment selected by the
// configuration.
template <class Fn>
int dispatch_env(const AppConfig& cfg, Fn&& fn) {
  if (cfg.env == "tictactoe") {
    return fn(TicTacToeState{}, EnvInfo{3, true, 9, 0.3});
  }
  if (cfg.env == "gomoku") {
    const int n = cfg.board_size > 0 ? cfg.board_size : 7;
    return fn(GomokuState(n), EnvInfo{n, true, n * n, 0.3});
  }
  if (cfg.env == "go") {
    const int n = cfg.board_size > 0 ? cfg.board_size : 5;
    return fn(GoState(n, cfg.komi), EnvInfo{n, true, n * n, 0.03});
  }
  if (cfg.env == "bandit") {
    const BanditArms arms = arms_from_config(cfg);
    return fn(BanditState(arms), EnvInfo{0, false, static_cast<int>(arms.arm_count()), 0.3});
  }
  throw std::invalid_argument("unknown environment: " + cfg.env);
}

template <GameState State>
State state_from_inputs(const State& initial, const EnvInfo& env, const std::string& state_file,
                        const std::string& moves) {
  State state = initial;
  if (!state_file.empty()) {
    const std::string text = read_file(state_file);
    if constexpr (requires { State::from_text(text); }) {
      state = State::from_text(text);
    } else {
      throw std::invalid_argument("--state is not supported for this environment");
    }
  }
  if (!moves.empty()) {
    std::istringstream in(moves);
    std::string token;
    while (std::getline(in, token, ','))
      state = state.apply(parse_action_notation(env.board_size, token));
  }
  return state;
}

void ensure_out_dir(const AppConfig& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const AppConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

// ---------------------------------------------------------------- search --

int cmd_search(const AppConfig& cfg, const std::string& state_file, const std::string& moves) {
  return dispatch_env(cfg, [&](auto initial, const EnvInfo& env) {
    using State = decltype(initial);
    const State state = state_from_inputs(initial, env, state_file, moves);
    if (state.is_terminal()) throw std::invalid_argument("search: the given state is terminal");

    EngineConfig engine = make_engine(cfg, env, false);
    engine.search.record_trace = true;
    engine.search.capture_snapshot = true;
    const auto evaluator = make_evaluator(cfg, cfg.evaluator, state);

    const SearchOutcome outcome = engine_move(state, engine, evaluator, cfg.seed);
    const Policy oracle = continue_to_oracle(*outcome.snapshot, state, evaluator, engine.search);

    ensure_out_dir(cfg);
    write_file(out_path(cfg, "trace.json"), trace_json(outcome, engine.search.budget).dump(2) + "\n");
    if (env.board_size > 0) {
      write_file(out_path(cfg, "heatmap.json"),
                 heatmap_json(cfg.env, env.board_size, engine.search.budget, outcome, oracle)
                         .dump(2) +
                     "\n");
    }

    std::cout << "iterations " << outcome.iterations_used << "/" << engine.search.budget
              << (outcome.terminated_early ? " (terminated early)" : "") << "\n";
    if (env.board_size > 0)
      std::cout << "best action " << action_notation(env.board_size, outcome.chosen_action)
                << "\n";
    else
      std::cout << "best arm " << outcome.chosen_action << "\n";
    std::cout << "wrote " << out_path(cfg, "trace.json");
    if (env.board_size > 0) std::cout << " and " << out_path(cfg, "heatmap.json");
    std::cout << "\n";
    return 0;
  });
}

// ----------------------------------------------------------------- match --

template <GameState State>
MatchReport run_configured_match(const AppConfig& cfg, const State& initial, const EnvInfo& env) {
  MatchSpec spec;
  spec.games = cfg.games;
  spec.swap_colors = cfg.swap_colors;
  spec.base_seed = cfg.seed;
  spec.workers = cfg.workers;

  const EngineConfig engine_a = make_engine(cfg, env, false);
  const EngineConfig engine_b = make_engine(cfg, env, true);
  const auto eval_a = make_evaluator(cfg, cfg.evaluator, initial);
  const auto eval_b = make_evaluator(
      cfg, cfg.evaluator_b.empty() ? cfg.evaluator : cfg.evaluator_b, initial);
  const MatchReport report = run_match(spec, initial, engine_a, engine_b, eval_a, eval_b);

  if (log_level() >= 1) {
    for (const auto& g : report.games)
      std::cerr << "game " << g.game_id << ": winner=" << g.winner << " moves=" << g.moves
                << " budget_a=" << g.budget_a << " budget_b=" << g.budget_b << "\n";
  }
  return report;
}

void print_match_summary(const MatchReport& report) {
  const auto& a = report.aggregates;
  std::cout << "A wins " << a.win_rate_a * 100 << "% +- " << a.win_rate_a_stderr * 100
            << "%, B wins " << a.win_rate_b * 100 << "%, draws " << a.draw_rate * 100 << "%\n"
            << "mean budget A " << a.mean_budget_a << " +- " << a.budget_a_stdev << ", B "
            << a.mean_budget_b << " +- " << a.budget_b_stdev << ", mean moves " << a.mean_moves
            << ", faults " << a.faults << "\n";
}

int cmd_match(const AppConfig& cfg) {
  return dispatch_env(cfg, [&](auto initial, const EnvInfo& env) {
    const MatchReport report = run_configured_match(cfg, initial, env);
    ensure_out_dir(cfg);
    write_file(out_path(cfg, "match.csv"), match_csv(report));
    write_file(out_path(cfg, "match.json"), match_json(report).dump(2) + "\n");
    print_match_summary(report);
    std::cout << "wrote " << out_path(cfg, "match.csv") << " and " << out_path(cfg, "match.json")
              << "\n";
    return report.aggregates.faults == 0 ? 0 : 1;
  });
}

// ----------------------------------------------------------------- sweep --

int cmd_sweep(const AppConfig& cfg, const std::string& axis, const std::string& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep: --grid must not be empty");
  std::vector<std::string> values;
  {
    std::istringstream in(grid);
    std::string token;
    while (std::getline(in, token, ',')) values.push_back(token);
  }
  if (values.empty()) throw std::invalid_argument("sweep: --grid must not be empty");

  return dispatch_env(cfg, [&](auto initial, const EnvInfo& env) {
    Json points = Json::array();
    std::string csv = "value,win_rate_a,win_rate_a_stderr,mean_budget_a,mean_budget_b,"
                      "mean_moves,faults\n";
    for (const auto& value : values) {
      AppConfig point = cfg;
      if (axis == "eps") set_config_key(point, "eps", value);
      else if (axis == "r") set_config_key(point, "r", value);
      else if (axis == "n") set_config_key(point, "n", value);
      else if (axis == "norm") set_config_key(point, "norm", value);
      else if (axis == "expansion") set_config_key(point, "expansion", value);
      else throw std::invalid_argument("sweep: unknown axis " + axis);

      const MatchReport report = run_configured_match(point, initial, env);
      const auto& a = report.aggregates;
      std::cout << axis << "=" << value << ": ";
      print_match_summary(report);
      points.push_back(Json{{"axis", axis}, {"value", value}, {"report", match_json(report)}});
      csv += value + ',' + detail::fixed(a.win_rate_a, 4) + ',' +
             detail::fixed(a.win_rate_a_stderr, 4) + ',' + detail::fixed(a.mean_budget_a, 4) +
             ',' + detail::fixed(a.mean_budget_b, 4) + ',' + detail::fixed(a.mean_moves, 2) +
             ',' + std::to_string(a.faults) + '\n';
    }
    ensure_out_dir(cfg);
    write_file(out_path(cfg, "sweep.json"), points.dump(2) + "\n");
    write_file(out_path(cfg, "sweep.csv"), csv);
    std::cout << "wrote " << out_path(cfg, "sweep.json") << " and " << out_path(cfg, "sweep.csv")
              << "\n";
    return 0;
  });
}

// ---------------------------------------------------------------- verify --

int cmd_verify(const AppConfig& cfg) {
  TheoryConfig theory;
  theory.arms = arms_from_config(cfg);
  theory.budget = cfg.n;
  theory.min_ratio = cfg.r;
  theory.delta = cfg.delta;
  theory.epsilon = cfg.eps;
  theory.trials = cfg.trials;
  theory.seed = cfg.seed != 0 ? cfg.seed : TheoryConfig{}.seed;

  const TheoryReport report = run_theory_suite(theory);
  for (const auto& c : report.claims) {
    std::cout << (c.conclusive ? (c.pass ? "[pass] " : "[FAIL] ") : "[inconclusive] ") << c.claim
              << ": empirical " << c.empirical << " vs bound " << c.bound << " over " << c.trials
              << " trials";
    if (!c.note.empty()) std::cout << " (" << c.note << ")";
    std::cout << "\n";
  }
  const auto& a = report.adaptivity;
  std::cout << "adaptivity: easy " << a.mean_easy << " vs hard " << a.mean_hard
            << " iterations (z=" << a.z_statistic << ", p=" << a.p_value << ")\n";

  ensure_out_dir(cfg);
  write_file(out_path(cfg, "theory.json"), theory_json(theory, report).dump(2) + "\n");
  std::cout << "wrote " << out_path(cfg, "theory.json") << "\n";
  return report.all_pass() ? 0 : 1;
}

// ------------------------------------------------------------------ play --

int cmd_play(const AppConfig& cfg, const std::string& engine_seat) {
  return dispatch_env(cfg, [&](auto initial, const EnvInfo& env) {
    using State = decltype(initial);
    if constexpr (!requires(const State& s) { s.to_text(); }) {
      (void)engine_seat;
      throw std::invalid_argument("play: only board environments are interactive");
      return 1;  // unreachable; keeps the deduced return type int
    } else {
    EngineConfig engine = make_engine(cfg, env, false);
    engine.search.record_trace = true;
    const auto evaluator = make_evaluator(cfg, cfg.evaluator, initial);
    const bool engine_first = engine_seat == "first";

    State state = initial;
    Rng sample_rng(derive_seed(cfg.seed, 0xfffffffULL));
    int move_index = 0;
    while (!state.is_terminal()) {
      std::cout << "\n" << state.to_text();
      const bool first_to_move = state.player_to_move() == Player::First;
      if (first_to_move == engine_first) {
        const SearchOutcome out =
            engine_move(state, engine, evaluator, derive_seed(cfg.seed, move_index));
        if (out.resigned) {
          std::cout << "engine resigns.\n";
          return 0;
        }
        double delta = std::numeric_limits<double>::quiet_NaN();
        if (!out.trace.empty())
          delta = engine.vet.norm == Norm::L1 ? out.trace.back().delta_l1
                                              : out.trace.back().delta_l2;
        std::cout << "engine plays " << action_notation(env.board_size, out.chosen_action)
                  << "  (budget " << out.iterations_used << "/" << engine.search.budget
                  << ", delta " << delta << ")\n";
        state = state.apply(out.chosen_action);
      } else {
        std::cout << "your move (e.g. c3" << (cfg.env == "go" ? " or pass" : "") << "): ";
        std::string line;
        if (!std::getline(std::cin, line)) return 0;
        try {
          state = state.apply(parse_action_notation(env.board_size, line));
        } catch (const std::exception& e) {
          std::cout << "illegal move (" << e.what() << "), try again.\n";
          continue;
        }
      }
      ++move_index;
    }
    std::cout << "\n" << state.to_text();
    const double value = state.terminal_value();
    if (value == 0.0) std::cout << "draw.\n";
    else
      std::cout << ((value > 0.0) == engine_first ? "engine wins.\n" : "you win.\n");
    return 0;
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  AppConfig cfg;

  // The config file seeds the defaults; explicit flags override it below.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = load_config(argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
    }
  }

  CLI::App app{"P-UCT tree search with virtual expansion and adaptive termination"};
  app.require_subcommand(1);

  std::string state_file, moves, axis, grid, engine_seat = "second", config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key=value configuration file");
    cmd->add_option("--env", cfg.env, "tictactoe|gomoku|go|bandit")->capture_default_str();
    cmd->add_option("--size", cfg.board_size, "board size (0 = env default)");
    cmd->add_option("--komi", cfg.komi, "go komi")->capture_default_str();
    cmd->add_option("--arms", cfg.arms, "bandit arm means, descending");
    cmd->add_option("--reward-law", cfg.reward_law, "bernoulli|uniform");
    cmd->add_option("--n", cfg.n, "search budget N")->capture_default_str();
    cmd->add_option("--r", cfg.r, "minimum budget ratio r")->capture_default_str();
    cmd->add_option("--eps", cfg.eps, "termination tolerance")->capture_default_str();
    cmd->add_option("--norm", cfg.norm, "l1|l2")->capture_default_str();
    cmd->add_option("--expansion", cfg.expansion, "vmcts|vanilla|greedy|truncated")
        ->capture_default_str();
    cmd->add_option("--evaluator", cfg.evaluator, "rollout|heuristic|minimax|bandit")
        ->capture_default_str();
    cmd->add_option("--rollouts", cfg.rollouts, "playouts per evaluation")->capture_default_str();
    cmd->add_option("--c1", cfg.c1)->capture_default_str();
    cmd->add_option("--c2", cfg.c2)->capture_default_str();
    cmd->add_option("--check-every", cfg.check_every, "termination check interval");
    cmd->add_flag("--selfplay", cfg.selfplay, "self-play mode: noise on, temperature 16");
    cmd->add_flag("!--no-resign", cfg.resign, "disable resignation");
    cmd->add_flag("--normalize-q", cfg.normalize_q, "min-max rescale Q inside selection");
    cmd->add_flag("!--no-swap", cfg.swap_colors, "do not alternate colors between games");
    cmd->add_option("--games", cfg.games)->capture_default_str();
    cmd->add_option("--seed", cfg.seed)->capture_default_str();
    cmd->add_option("--workers", cfg.workers)->capture_default_str();
    cmd->add_option("--out-dir", cfg.out_dir)->capture_default_str();
    cmd->add_option("--delta", cfg.delta, "confidence parameter")->capture_default_str();
    cmd->add_option("--trials", cfg.trials, "verification trials")->capture_default_str();
    cmd->add_option("--expansion-b", cfg.expansion_b, "engine B expansion mode")
        ->capture_default_str();
    cmd->add_option("--evaluator-b", cfg.evaluator_b, "engine B evaluator (default: same as A)");
    cmd->add_option("--n-b", cfg.n_b, "engine B budget (0 = same as A)");
    cmd->add_option("--r-b", cfg.r_b, "engine B ratio");
    cmd->add_option("--eps-b", cfg.eps_b, "engine B tolerance");
    cmd->add_option("--norm-b", cfg.norm_b, "engine B norm");
  };

  CLI::App* search = app.add_subcommand("search", "run one search, export trace and heatmap");
  add_common(search);
  search->add_option("--state", state_file, "board position file");
  search->add_option("--moves", moves, "comma-separated moves from the initial position");

  CLI::App* match = app.add_subcommand("match", "engine A vs engine B");
  add_common(match);

  CLI::App* sweep = app.add_subcommand("sweep", "match at every grid point of one axis");
  add_common(sweep);
  sweep->add_option("--axis", axis, "eps|r|n|norm|expansion")->required();
  sweep->add_option("--grid", grid, "comma-separated axis values")->required();

  CLI::App* verify = app.add_subcommand("verify", "statistical checks of the termination bounds");
  add_common(verify);

  CLI::App* play = app.add_subcommand("play", "interactive text-mode game");
  add_common(play);
  play->add_option("--engine-seat", engine_seat, "first|second")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (search->parsed()) return cmd_search(cfg, state_file, moves);
    if (match->parsed()) return cmd_match(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg, axis, grid);
    if (verify->parsed()) return cmd_verify(cfg);
    if (play->parsed()) return cmd_play(cfg, engine_seat);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
