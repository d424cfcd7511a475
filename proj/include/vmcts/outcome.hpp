#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "vmcts/policy.hpp"
#include "vmcts/rng.hpp"
#include "vmcts/tree.hpp"

namespace vmcts {

/// One per-iteration diagnostic row of an adaptive search. delta_l1/l2 are
/// NaN while no comparison snapshot exists yet.
struct IterationTrace {
  int iteration = 0;
  double delta_l1 = std::numeric_limits<double>::quiet_NaN();
  double delta_l2 = std::numeric_limits<double>::quiet_NaN();
  std::int64_t virtual_time_ns = 0;
  bool terminated = false;
};

/// Everything needed to resume a search exactly where it stopped: the tree,
/// the generator state and the number of completed iterations. Used to
/// continue a terminated search to the full budget for oracle comparisons.
struct SearchSnapshot {
  SearchTree tree;
  Rng rng;
  int iterations = 0;
};

struct SearchOutcome {
  Policy policy;
  Action chosen_action = -1;
  int iterations_used = 0;
  bool terminated_early = false;
  bool resigned = false;
  std::vector<IterationTrace> trace;
  std::shared_ptr<const SearchSnapshot> snapshot;
};

}  // namespace vmcts
