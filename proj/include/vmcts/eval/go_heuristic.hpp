#pragma once

#include "vmcts/envs/go.hpp"
#include "vmcts/eval/evaluator.hpp"

namespace vmcts {

/// Cheap Go value estimate: tanh-squashed area margin (stones plus
/// territory minus komi) from black's perspective. Priors are uniform over
/// the legal moves.
class GoHeuristicEvaluator {
 public:
  explicit GoHeuristicEvaluator(double slope = 0.1) : slope_(slope) {
    if (slope <= 0.0) throw std::invalid_argument("go heuristic: slope must be positive");
  }

  Evaluation operator()(const GoState& state, Rng&) const {
    Evaluation out;
    out.priors = uniform_priors(state.legal_actions().size());
    out.value = std::tanh(slope_ * state.score_margin());
    return out;
  }

 private:
  double slope_;
};

}  // namespace vmcts
