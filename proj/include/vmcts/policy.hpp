#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vmcts/common.hpp"

namespace vmcts {

/// Norm used when comparing two policies.
enum class Norm { L1, L2 };

/// A probability distribution over the legal actions of one state.
/// `support[i]` is the action that `probabilities[i]` refers to; the support
/// is kept in ascending action order.
struct Policy {
  std::vector<double> probabilities;
  std::vector<Action> support;

  std::size_t size() const { return probabilities.size(); }

  /// Index of the most probable entry, ties broken toward the lowest index.
  std::size_t argmax_index() const {
    if (probabilities.empty()) throw std::invalid_argument("Policy: empty support");
    std::size_t best = 0;
    for (std::size_t i = 1; i < probabilities.size(); ++i)
      if (probabilities[i] > probabilities[best]) best = i;
    return best;
  }

  Action argmax_action() const { return support[argmax_index()]; }

  double probability_of(Action a) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i] == a) return probabilities[i];
    return 0.0;
  }
};

inline void check_same_support(const Policy& a, const Policy& b) {
  if (a.support != b.support)
    throw std::invalid_argument("policy distance: mismatched supports");
}

inline double l1_distance(const Policy& a, const Policy& b) {
  check_same_support(a, b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += std::abs(a.probabilities[i] - b.probabilities[i]);
  return d;
}

inline double l2_distance(const Policy& a, const Policy& b) {
  check_same_support(a, b);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a.probabilities[i] - b.probabilities[i];
    d += diff * diff;
  }
  return std::sqrt(d);
}

inline double policy_distance(const Policy& a, const Policy& b, Norm norm) {
  return norm == Norm::L1 ? l1_distance(a, b) : l2_distance(a, b);
}

}  // namespace vmcts
