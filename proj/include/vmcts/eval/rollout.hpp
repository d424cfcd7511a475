#pragma once

#include "vmcts/eval/evaluator.hpp"

namespace vmcts {

/// Estimates a state's value by averaging the outcomes of uniformly random
/// playouts. Priors are uniform over the legal actions. With zero rollouts
/// the value falls back to 0.
template <GameState State>
class RolloutEvaluator {
 public:
  explicit RolloutEvaluator(int rollouts) : rollouts_(rollouts) {
    if (rollouts < 0) throw std::invalid_argument("rollouts must be >= 0");
  }

  Evaluation operator()(const State& state, Rng& rng) const {
    Evaluation out;
    out.priors = uniform_priors(state.legal_actions().size());
    double total = 0.0;
    for (int i = 0; i < rollouts_; ++i) total += playout(state, rng);
    out.value = rollouts_ > 0 ? total / rollouts_ : 0.0;
    return out;
  }

 private:
  static double playout(State state, Rng& rng) {
    while (!state.is_terminal()) {
      const auto actions = state.legal_actions();
      state = state.apply(actions[uniform_index(rng, actions.size())]);
    }
    return state.terminal_value();
  }

  int rollouts_;
};

}  // namespace vmcts
