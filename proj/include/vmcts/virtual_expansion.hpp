#pragma once

#include <chrono>
#include <cmath>
#include <optional>

#include "vmcts/search.hpp"

namespace vmcts {

/// Parameters of the adaptive termination rule: stop once at least
/// ceil(r*N) iterations ran and the virtual expanded policy moved less than
/// epsilon (under the chosen norm) since the half-way snapshot.
struct VetConfig {
  double min_ratio = 0.2;  // r
  double epsilon = 0.1;
  Norm norm = Norm::L1;
  int check_every = 1;

  void validate() const {
    if (min_ratio <= 0.0 || min_ratio >= 1.0)
      throw std::invalid_argument("VetConfig: ratio must be in (0,1)");
    if (epsilon < 0.0) throw std::invalid_argument("VetConfig: epsilon must be >= 0");
    if (check_every < 1) throw std::invalid_argument("VetConfig: check_every must be >= 1");
  }
};

/// ceil(r * N) with a guard against representation error in r (0.2 * 150
/// must come out as 30, not 31).
inline int min_budget(double ratio, int budget) {
  const int k = static_cast<int>(std::ceil(ratio * budget - 1e-9));
  return std::max(k, 1);
}

/// Virtual expanded policies indexed by the iteration that produced them.
class PolicySnapshotLog {
 public:
  void put(int iteration, Policy policy) {
    if (iteration < 1) throw std::invalid_argument("snapshot log: iteration must be >= 1");
    if (static_cast<std::size_t>(iteration) >= entries_.size())
      entries_.resize(iteration + 1);
    entries_[iteration] = std::move(policy);
  }

  bool has(int iteration) const {
    return iteration >= 1 && static_cast<std::size_t>(iteration) < entries_.size() &&
           entries_[iteration].has_value();
  }

  const Policy& at(int iteration) const {
    if (!has(iteration)) throw std::invalid_argument("snapshot log: missing snapshot");
    return *entries_[iteration];
  }

  /// Latest snapshot at or before `iteration`, if any.
  std::optional<int> floor_index(int iteration) const {
    for (int j = std::min<int>(iteration, static_cast<int>(entries_.size()) - 1); j >= 1; --j)
      if (entries_[j].has_value()) return j;
    return std::nullopt;
  }

 private:
  std::vector<std::optional<Policy>> entries_;
};

/// Plays the remaining budget as selection-only steps from the root: visit
/// counts advance through the scratch copy while every Q value, prior and
/// the tree itself stay frozen. Returns scratch counts with total == budget.
inline VirtualRootCounts virtual_expand(const SearchTree& tree, const SearchConfig& config,
                                        int budget) {
  VirtualRootCounts counts = root_counts(tree);
  if (counts.total > budget)
    throw std::invalid_argument("virtual_expand: tree already past the budget");
  while (counts.total < budget) {
    const Action action = puct_select(tree, config, tree.root(), &counts);
    for (std::size_t i = 0; i < counts.actions.size(); ++i) {
      if (counts.actions[i] == action) {
        counts.bump(i);
        break;
      }
    }
  }
  return counts;
}

/// pi_hat(a) = scratch_count(a) / budget.
inline Policy virtual_policy(const VirtualRootCounts& counts, int budget) {
  if (counts.total != budget)
    throw std::invalid_argument("virtual_policy: counts total does not match the budget");
  Policy policy;
  policy.support = counts.actions;
  policy.probabilities.resize(counts.counts.size());
  for (std::size_t i = 0; i < counts.counts.size(); ++i)
    policy.probabilities[i] = counts.counts[i] / static_cast<double>(budget);
  return policy;
}

/// The termination test itself: k >= ceil(r*N) and the distance between the
/// snapshot at k and the one at floor(k/2) (nearest computed snapshot below
/// it) is strictly less than epsilon.
inline bool vet_check(const PolicySnapshotLog& log, int k, const VetConfig& vet, int budget) {
  if (!log.has(k)) throw std::invalid_argument("vet_check: missing snapshot at k");
  const auto half = log.floor_index(k / 2);
  if (!half) throw std::invalid_argument("vet_check: missing snapshot at k/2");
  if (k < min_budget(vet.min_ratio, budget)) return false;
  return policy_distance(log.at(k), log.at(*half), vet.norm) < vet.epsilon;
}

/// Adaptive search: each iteration runs one vanilla expansion, then a full
/// virtual expansion to the budget; the search stops early as soon as the
/// termination rule fires and returns the virtual expanded policy. Without
/// a termination it returns the plain visitation policy after N iterations
/// (identical to the virtual one at full budget).
template <GameState State, EvaluatorFor<State> Evaluator>
SearchOutcome search_vmcts(const State& state, const Evaluator& evaluator,
                           const SearchConfig& config, const VetConfig& vet) {
  vet.validate();
  SearchTree tree;
  Rng rng(config.seed);
  detail::setup_root(tree, state, evaluator, config, rng);

  const int budget = config.budget;
  const int k_min = min_budget(vet.min_ratio, budget);
  PolicySnapshotLog log;

  SearchOutcome outcome;
  for (int k = 1; k <= budget; ++k) {
    run_iteration(tree, state, evaluator, config, rng);
    if (k % vet.check_every != 0) continue;

    const auto start = std::chrono::steady_clock::now();
    const VirtualRootCounts counts = virtual_expand(tree, config, budget);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    Policy snapshot = virtual_policy(counts, budget);
    log.put(k, std::move(snapshot));

    IterationTrace row;
    row.iteration = k;
    row.virtual_time_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count();
    const auto half = log.floor_index(k / 2);
    if (half) {
      row.delta_l1 = l1_distance(log.at(k), log.at(*half));
      row.delta_l2 = l2_distance(log.at(k), log.at(*half));
    }
    bool stop = false;
    if (k >= k_min && k < budget && half && vet_check(log, k, vet, budget)) {
      row.terminated = true;
      stop = true;
    }
    if (config.record_trace) outcome.trace.push_back(row);
    if (stop) {
      outcome.policy = log.at(k);
      outcome.iterations_used = k;
      outcome.terminated_early = true;
      break;
    }
  }

  if (!outcome.terminated_early) {
    outcome.policy = visitation_policy(tree);
    outcome.iterations_used = budget;
  }
  outcome.chosen_action = outcome.policy.argmax_action();
  outcome.resigned = should_resign(tree, config);
  if (config.capture_snapshot)
    outcome.snapshot = std::make_shared<SearchSnapshot>(
        SearchSnapshot{std::move(tree), rng, outcome.iterations_used});
  return outcome;
}

/// Ablation policy: dump the whole remaining budget onto the currently
/// most-visited root action.
inline Policy greedy_expand(const SearchTree& tree, int budget) {
  VirtualRootCounts counts = root_counts(tree);
  if (counts.total > budget)
    throw std::invalid_argument("greedy_expand: tree already past the budget");
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.counts.size(); ++i)
    if (counts.counts[i] > counts.counts[best]) best = i;
  counts.counts[best] += static_cast<int>(budget - counts.total);
  counts.total = budget;
  return virtual_policy(counts, budget);
}

/// Vanilla search cut off after k_stop iterations, returning N(root,.)/k_stop.
template <GameState State, EvaluatorFor<State> Evaluator>
SearchOutcome truncated_vanilla(const State& state, const Evaluator& evaluator,
                                const SearchConfig& config, int k_stop) {
  if (k_stop < 1 || k_stop > config.budget)
    throw std::invalid_argument("truncated_vanilla: k_stop must be in [1, budget]");
  SearchTree tree;
  Rng rng(config.seed);
  detail::setup_root(tree, state, evaluator, config, rng);
  for (int k = 0; k < k_stop; ++k) run_iteration(tree, state, evaluator, config, rng);

  SearchOutcome outcome;
  outcome.policy = visitation_policy(tree);
  outcome.chosen_action = outcome.policy.argmax_action();
  outcome.iterations_used = k_stop;
  outcome.resigned = should_resign(tree, config);
  if (config.capture_snapshot)
    outcome.snapshot = std::make_shared<SearchSnapshot>(
        SearchSnapshot{std::move(tree), rng, k_stop});
  return outcome;
}

/// Continues a clone of the snapshot with real iterations up to the full
/// budget and returns the resulting oracle policy pi_N. The snapshot itself
/// is untouched.
template <GameState State, EvaluatorFor<State> Evaluator>
Policy continue_to_oracle(const SearchSnapshot& snapshot, const State& root_state,
                          const Evaluator& evaluator, const SearchConfig& config) {
  SearchTree tree = snapshot.tree;
  Rng rng = snapshot.rng;
  for (int k = snapshot.iterations; k < config.budget; ++k)
    run_iteration(tree, root_state, evaluator, config, rng);
  return visitation_policy(tree);
}

}  // namespace vmcts
