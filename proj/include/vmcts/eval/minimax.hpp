#pragma once

#include <string>
#include <unordered_map>

#include "vmcts/common.hpp"
#include "vmcts/eval/evaluator.hpp"

namespace vmcts {

/// Perfect-play oracle for games small enough to solve exhaustively.
/// The full table is built once from a root state; evaluation afterwards is
/// a lookup, so a constructed evaluator is immutable and shareable.
/// Priors are uniform over the mover's optimal actions.
///
/// Requires State::to_text() as the memo key. Throws CapabilityError when
/// the reachable state space exceeds `max_positions`.
template <GameState State>
class MinimaxEvaluator {
 public:
  explicit MinimaxEvaluator(const State& root, std::size_t max_positions = 500000)
      : max_positions_(max_positions) {
    solve(root);
  }

  /// Exact game value from the first player's perspective.
  double value_of(const State& state) const {
    const auto it = table_.find(state.to_text());
    if (it == table_.end())
      throw std::invalid_argument("minimax: state not reachable from the solved root");
    return it->second;
  }

  Evaluation operator()(const State& state, Rng&) const {
    Evaluation out;
    out.value = value_of(state);
    const auto actions = state.legal_actions();
    if (actions.empty()) return out;

    const bool maximizing = state.player_to_move() != Player::Second;
    std::vector<double> child_values(actions.size());
    double best = maximizing ? -2.0 : 2.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      child_values[i] = value_of(state.apply(actions[i]));
      best = maximizing ? std::max(best, child_values[i]) : std::min(best, child_values[i]);
    }
    out.priors.assign(actions.size(), 0.0);
    int optimal = 0;
    for (std::size_t i = 0; i < actions.size(); ++i)
      if (child_values[i] == best) ++optimal;
    for (std::size_t i = 0; i < actions.size(); ++i)
      if (child_values[i] == best) out.priors[i] = 1.0 / optimal;
    return out;
  }

  std::size_t table_size() const { return table_.size(); }

 private:
  double solve(const State& state) {
    const std::string key = state.to_text();
    if (const auto it = table_.find(key); it != table_.end()) return it->second;
    if (table_.size() >= max_positions_)
      throw CapabilityError("minimax: game too large to solve exhaustively");
    double value;
    if (state.is_terminal()) {
      value = state.terminal_value();
    } else {
      const bool maximizing = state.player_to_move() != Player::Second;
      value = maximizing ? -2.0 : 2.0;
      for (Action a : state.legal_actions()) {
        const double child = solve(state.apply(a));
        value = maximizing ? std::max(value, child) : std::min(value, child);
      }
    }
    table_.emplace(key, value);
    return value;
  }

  std::size_t max_positions_;
  std::unordered_map<std::string, double> table_;
};

}  // namespace vmcts
