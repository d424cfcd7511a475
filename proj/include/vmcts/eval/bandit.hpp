#pragma once

#include "vmcts/envs/bandit.hpp"
#include "vmcts/eval/evaluator.hpp"

namespace vmcts {

/// Bandit leaf evaluator: the value is a fresh reward sample of the arm
/// chosen at the root on the path to this state, and the priors are the
/// configured per-arm prior scores. Evaluating the root itself (no arm
/// chosen yet) yields value 0.
class BanditEvaluator {
 public:
  Evaluation operator()(const BanditState& state, Rng& rng) const {
    Evaluation out;
    out.priors = state.arms().priors;
    out.value = state.root_arm() < 0 ? 0.0 : bandit_pull(state, state.root_arm(), rng);
    return out;
  }
};

}  // namespace vmcts
