#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "vmcts/envs/env.hpp"
#include "vmcts/eval/evaluator.hpp"
#include "vmcts/outcome.hpp"
#include "vmcts/policy.hpp"
#include "vmcts/rng.hpp"
#include "vmcts/tree.hpp"

namespace vmcts {

struct SearchConfig {
  int budget = 150;  // N, leaf evaluations per search
  double c1 = 1.25;
  double c2 = 19652.0;
  double discount = 1.0;
  bool two_player = true;
  // Raw Q values by default; the MuZero-style running min-max rescale is
  // available for evaluators whose value scale is unknown up front.
  bool normalize_q = false;

  // Root exploration noise; off by default (evaluation mode), self-play
  // turns it on.
  bool add_noise = false;
  double dirichlet_alpha = 0.3;
  double noise_fraction = 0.25;
  // Typical branching used to rescale alpha on wide/narrow positions;
  // 0 means "use the current number of legal moves" (no rescaling).
  int reference_branching = 0;

  // Moves below this index are sampled from the policy, later moves take
  // the argmax. 0 = always argmax.
  int temperature_moves = 0;

  // Concede when every root Q falls below this (raw, unnormalized) level.
  std::optional<double> resign_threshold;

  std::uint64_t seed = 0;

  bool record_trace = false;
  bool capture_snapshot = false;

  void validate() const {
    if (budget < 2) throw std::invalid_argument("SearchConfig: budget must be >= 2");
    if (c1 <= 0.0 || c2 <= 0.0) throw std::invalid_argument("SearchConfig: c1 and c2 must be positive");
    if (discount <= 0.0 || discount > 1.0)
      throw std::invalid_argument("SearchConfig: discount must be in (0,1]");
    if (dirichlet_alpha <= 0.0) throw std::invalid_argument("SearchConfig: alpha must be positive");
    if (noise_fraction < 0.0 || noise_fraction > 1.0)
      throw std::invalid_argument("SearchConfig: noise fraction must be in [0,1]");
    if (temperature_moves < 0)
      throw std::invalid_argument("SearchConfig: temperature threshold must be >= 0");
    if (resign_threshold && (*resign_threshold < -1.0 || *resign_threshold >= 0.0))
      throw std::invalid_argument("SearchConfig: resign threshold must be in [-1,0)");
  }
};

/// P-UCT choice at `node`: argmax over children of
///   Q(a) + P(a) * sqrt(sum_b n(b)) / (1 + n(a)) * (c1 + log((sum_b n(b) + c2 + 1) / c2))
/// with ties broken toward the lowest action. Unvisited children score with
/// the subtree mean substitute, and Q is rescaled by the running min-max
/// bounds when normalization is on. `counts_override` replaces the visit
/// counts n(a) (but not the Q values) -- that is the whole trick behind
/// virtual expansion.
inline Action puct_select(const SearchTree& tree, const SearchConfig& config, NodeId node,
                          const VirtualRootCounts* counts_override = nullptr) {
  if (!tree.stats(node).expanded) throw std::invalid_argument("puct_select: node not expanded");
  const auto children = tree.children(node);
  if (counts_override && counts_override->counts.size() != children.size())
    throw std::invalid_argument("puct_select: counts override shape mismatch");

  long total = 0;
  if (counts_override) {
    total = counts_override->total;
  } else {
    for (const auto& edge : children) total += tree.stats(edge.node).visit_count;
  }
  const double sqrt_total = std::sqrt(static_cast<double>(total));
  const double factor =
      config.c1 + std::log((static_cast<double>(total) + config.c2 + 1.0) / config.c2);
  const double qbar = unvisited_q_default(tree, node);

  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const NodeStats& stats = tree.stats(children[i].node);
    const int n = counts_override ? counts_override->count_of(i) : stats.visit_count;
    double q = stats.visit_count > 0 ? stats.mean() : qbar;
    if (config.normalize_q) q = tree.bounds().normalize(q);
    const double score = q + stats.prior * (sqrt_total / (1.0 + n)) * factor;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return children[best].action;
}

/// Expands `node` with the evaluator's priors for `state`'s legal actions.
template <GameState State, EvaluatorFor<State> Evaluator>
Evaluation expand_node(SearchTree& tree, NodeId node, const State& state,
                       const Evaluator& evaluator, Rng& rng) {
  Evaluation eval = evaluator(state, rng);
  const auto actions = state.legal_actions();
  if (eval.priors.size() != actions.size())
    throw std::logic_error("evaluator returned wrong prior count");
  tree.expand(node, actions, eval.priors);
  return eval;
}

/// Mixes Dirichlet noise into the root priors:
/// P <- (1-f) P + f d, d ~ Dirichlet(alpha_eff) where alpha is rescaled by
/// reference_branching / |legal| so wide positions get flatter noise.
inline void apply_root_noise(SearchTree& tree, const SearchConfig& config, Rng& rng) {
  const auto children = tree.children(tree.root());
  if (!tree.stats(tree.root()).expanded) throw std::invalid_argument("apply_root_noise: root not expanded");
  const double f = config.noise_fraction;
  if (f <= 0.0) return;
  double alpha = config.dirichlet_alpha;
  if (config.reference_branching > 0)
    alpha *= static_cast<double>(config.reference_branching) / static_cast<double>(children.size());
  const auto noise = dirichlet(rng, alpha, children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    NodeStats& stats = tree.stats(children[i].node);
    stats.prior = (1.0 - f) * stats.prior + f * noise[i];
  }
}

namespace detail {

// Converts a first-player-perspective value into the perspective of the
// player who moved into `state`, which is what backpropagation stores at
// the evaluated node.
template <GameState State>
double backup_value(const State& state, double first_player_value, bool two_player) {
  if (!two_player) return first_player_value;
  return state.player_to_move() == Player::Second ? first_player_value : -first_player_value;
}

}  // namespace detail

/// One search iteration: descend by P-UCT until an unvisited edge (or a
/// terminal state), evaluate exactly once, back the value up the path.
/// Returns true when the iteration ended on a terminal state (in which case
/// the evaluator was not called).
template <GameState State, EvaluatorFor<State> Evaluator>
bool run_iteration(SearchTree& tree, const State& root_state, const Evaluator& evaluator,
                   const SearchConfig& config, Rng& rng) {
  if (!tree.stats(tree.root()).expanded)
    throw std::invalid_argument("run_iteration: root not expanded");
  std::vector<NodeId> path{tree.root()};
  NodeId node = tree.root();
  State state = root_state;
  double leaf_value = 0.0;
  bool terminal_hit = false;
  for (;;) {
    const Action action = puct_select(tree, config, node);
    const NodeId child = tree.child(node, action);
    state = state.apply(action);
    path.push_back(child);
    if (state.is_terminal()) {
      leaf_value = detail::backup_value(state, state.terminal_value(), config.two_player);
      terminal_hit = true;
      break;
    }
    if (!tree.stats(child).expanded) {
      const Evaluation eval = expand_node(tree, child, state, evaluator, rng);
      leaf_value = detail::backup_value(state, eval.value, config.two_player);
      break;
    }
    node = child;
  }
  backpropagate(tree, path, leaf_value, config.two_player, config.discount);
  return terminal_hit;
}

/// Normalized root visitation distribution N(root,a) / sum_b N(root,b).
inline Policy visitation_policy(const SearchTree& tree) {
  Policy policy;
  const auto children = tree.children(tree.root());
  long total = 0;
  for (const auto& edge : children) total += tree.stats(edge.node).visit_count;
  if (total == 0) throw std::logic_error("visitation_policy: no visits yet");
  for (const auto& edge : children) {
    policy.support.push_back(edge.action);
    policy.probabilities.push_back(tree.stats(edge.node).visit_count / static_cast<double>(total));
  }
  return policy;
}

/// Draws a move from `policy` when move_index is below the temperature
/// threshold, otherwise plays the argmax (ties toward the lowest action).
inline Action sample_action(const Policy& policy, int move_index, int temperature_moves,
                            Rng& rng) {
  if (policy.support.empty()) throw std::invalid_argument("sample_action: empty policy");
  if (move_index < temperature_moves)
    return policy.support[categorical(rng, policy.probabilities)];
  return policy.argmax_action();
}

/// True when every visited root child sits below the resign threshold
/// (raw Q, not min-max normalized). Disabled threshold never resigns.
inline bool should_resign(const SearchTree& tree, const SearchConfig& config) {
  if (!config.resign_threshold) return false;
  double best = -std::numeric_limits<double>::infinity();
  int visited = 0;
  for (const auto& edge : tree.children(tree.root())) {
    const NodeStats& stats = tree.stats(edge.node);
    if (stats.visit_count > 0) {
      best = std::max(best, stats.mean());
      ++visited;
    }
  }
  if (visited == 0) throw std::invalid_argument("should_resign: no visited root child");
  return best < *config.resign_threshold;
}

namespace detail {

template <GameState State, EvaluatorFor<State> Evaluator>
void setup_root(SearchTree& tree, const State& state, const Evaluator& evaluator,
                const SearchConfig& config, Rng& rng) {
  if (state.is_terminal()) throw std::invalid_argument("search: terminal input state");
  config.validate();
  expand_node(tree, tree.root(), state, evaluator, rng);
  if (config.add_noise) apply_root_noise(tree, config, rng);
}

}  // namespace detail

/// Fixed-budget search: exactly N leaf evaluations, policy N(root,.)/N.
template <GameState State, EvaluatorFor<State> Evaluator>
SearchOutcome search_vanilla(const State& state, const Evaluator& evaluator,
                             const SearchConfig& config) {
  SearchTree tree;
  Rng rng(config.seed);
  detail::setup_root(tree, state, evaluator, config, rng);
  for (int k = 0; k < config.budget; ++k) run_iteration(tree, state, evaluator, config, rng);

  SearchOutcome outcome;
  outcome.policy = visitation_policy(tree);
  outcome.chosen_action = outcome.policy.argmax_action();
  outcome.iterations_used = config.budget;
  outcome.terminated_early = false;
  outcome.resigned = should_resign(tree, config);
  if (config.capture_snapshot)
    outcome.snapshot = std::make_shared<SearchSnapshot>(SearchSnapshot{tree, rng, config.budget});
  return outcome;
}

}  // namespace vmcts
