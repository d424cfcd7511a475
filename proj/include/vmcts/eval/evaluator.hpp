#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>
#include <vector>

#include "vmcts/envs/env.hpp"
#include "vmcts/rng.hpp"

namespace vmcts {

/// Output of a leaf evaluation: a normalized prior over the state's legal
/// actions (in legal_actions() order) and a value in [-1, 1]. For two-player
/// games the value is always from the first player's perspective; the search
/// converts it during backup.
struct Evaluation {
  std::vector<double> priors;
  double value = 0.0;

  void validate() const {
    double total = 0.0;
    for (double p : priors) {
      if (p < 0.0) throw std::logic_error("Evaluation: negative prior");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) throw std::logic_error("Evaluation: priors not normalized");
    if (value < -1.0 || value > 1.0) throw std::logic_error("Evaluation: value outside [-1,1]");
  }
};

template <class E, class State>
concept EvaluatorFor = GameState<State> && requires(const E e, const State& s, Rng& rng) {
  { e(s, rng) } -> std::same_as<Evaluation>;
};

inline std::vector<double> uniform_priors(std::size_t count) {
  return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

}  // namespace vmcts
