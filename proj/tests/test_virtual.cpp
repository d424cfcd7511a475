#include <catch2/catch_amalgamated.hpp>

#include "vmcts/envs/bandit.hpp"
#include "vmcts/envs/tictactoe.hpp"
#include "vmcts/eval/bandit.hpp"
#include "vmcts/eval/rollout.hpp"
#include "vmcts/virtual_expansion.hpp"

using namespace vmcts;

namespace {

SearchConfig plain_config() {
  SearchConfig cfg;
  cfg.normalize_q = false;
  cfg.two_player = false;
  return cfg;
}

void expand_with_priors(SearchTree& tree, NodeId id, const std::vector<double>& priors) {
  std::vector<Action> actions(priors.size());
  for (std::size_t i = 0; i < priors.size(); ++i) actions[i] = static_cast<Action>(i);
  tree.expand(id, actions, priors);
}

void set_edge(SearchTree& tree, NodeId id, int visits, double mean) {
  tree.stats(id).visit_count = visits;
  tree.stats(id).value_sum = mean * visits;
}

double reference_score(double q, double p, int n, long total, double c1, double c2) {
  return q + p * (std::sqrt(static_cast<double>(total)) / (1.0 + n)) *
                 (c1 + std::log((total + c2 + 1.0) / c2));
}

Policy make_policy(std::vector<double> probs) {
  Policy p;
  p.probabilities = std::move(probs);
  p.support.resize(p.probabilities.size());
  for (std::size_t i = 0; i < p.support.size(); ++i) p.support[i] = static_cast<Action>(i);
  return p;
}

}  // namespace

TEST_CASE("virtual expansion with no remaining budget returns the real counts") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {0.5, 0.5});
  const auto children = tree.children(tree.root());
  set_edge(tree, children[0].node, 3, 0.4);
  set_edge(tree, children[1].node, 1, 0.2);
  const VirtualRootCounts counts = virtual_expand(tree, plain_config(), 4);
  REQUIRE(counts.counts == std::vector<int>{3, 1});
  REQUIRE(counts.total == 4);
}

TEST_CASE("virtual expansion follows the frozen-Q selection sequence") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {0.5, 0.5});
  const auto children = tree.children(tree.root());
  set_edge(tree, children[0].node, 1, 1.0);
  set_edge(tree, children[1].node, 1, 0.0);

  const SearchConfig cfg = plain_config();
  const VirtualRootCounts counts = virtual_expand(tree, cfg, 4);
  REQUIRE(counts.counts == std::vector<int>{3, 1});

  // Reference: replay the per-step argmax with the frozen Q values.
  std::vector<int> ref{1, 1};
  for (int step = 0; step < 2; ++step) {
    const long total = ref[0] + ref[1];
    const double s0 = reference_score(1.0, 0.5, ref[0], total, cfg.c1, cfg.c2);
    const double s1 = reference_score(0.0, 0.5, ref[1], total, cfg.c1, cfg.c2);
    ref[s0 >= s1 ? 0 : 1] += 1;
  }
  REQUIRE(counts.counts[0] == ref[0]);
  REQUIRE(counts.counts[1] == ref[1]);
}

TEST_CASE("symmetric roots spread virtual visits round-robin") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (const auto& edge : tree.children(tree.root())) set_edge(tree, edge.node, 1, 0.5);
  const VirtualRootCounts counts = virtual_expand(tree, plain_config(), 9);
  REQUIRE(counts.counts == std::vector<int>{3, 3, 3});
}

TEST_CASE("virtual expansion never mutates the tree") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {0.4, 0.3, 0.3});
  const auto children = tree.children(tree.root());
  set_edge(tree, children[0].node, 2, 0.9);
  set_edge(tree, children[1].node, 1, -0.2);
  const auto before = tree.snapshot_stats();
  const SearchTree copy = tree;

  const VirtualRootCounts counts = virtual_expand(tree, plain_config(), 20);
  REQUIRE(counts.total == 20);
  REQUIRE(tree.snapshot_stats() == before);
  REQUIRE(tree == copy);
  for (std::size_t i = 0; i < counts.counts.size(); ++i)
    REQUIRE(counts.counts[i] >= tree.stats(children[i].node).visit_count);

  REQUIRE_THROWS_AS(virtual_expand(tree, plain_config(), 2), std::invalid_argument);
}

TEST_CASE("virtual policy is the scratch count distribution") {
  VirtualRootCounts counts;
  counts.actions = {0, 1};
  counts.counts = {3, 1};
  counts.total = 4;
  const Policy p = virtual_policy(counts, 4);
  REQUIRE(p.probabilities == std::vector<double>{0.75, 0.25});

  counts.counts = {4, 0};
  const Policy onehot = virtual_policy(counts, 4);
  REQUIRE(onehot.probabilities == std::vector<double>{1.0, 0.0});

  counts.actions = {0, 1};
  counts.counts = {76, 74};
  counts.total = 150;
  const Policy p2 = virtual_policy(counts, 150);
  REQUIRE(p2.probabilities[0] == Catch::Approx(76.0 / 150.0).margin(1e-9));
  REQUIRE(p2.probabilities[1] == Catch::Approx(74.0 / 150.0).margin(1e-9));

  REQUIRE_THROWS_AS(virtual_policy(counts, 151), std::invalid_argument);
}

TEST_CASE("vet check uses a strict inequality") {
  PolicySnapshotLog log;
  log.put(5, make_policy({0.70, 0.30}));
  log.put(10, make_policy({0.75, 0.25}));

  VetConfig vet;
  vet.min_ratio = 0.2;
  vet.epsilon = 0.1;

  // L1 distance is exactly 0.10, not < 0.10.
  REQUIRE(!vet_check(log, 10, vet, 20));

  vet.epsilon = 0.1000001;
  REQUIRE(vet_check(log, 10, vet, 20));

  // Identical snapshots terminate for any positive epsilon.
  log.put(6, make_policy({0.75, 0.25}));
  log.put(12, make_policy({0.75, 0.25}));
  vet.epsilon = 1e-9;
  REQUIRE(vet_check(log, 12, vet, 20));

  // Epsilon zero can never fire.
  vet.epsilon = 0.0;
  REQUIRE(!vet_check(log, 12, vet, 20));

  // Below the minimum budget the rule never fires.
  vet.epsilon = 10.0;
  REQUIRE(!vet_check(log, 10, vet, 100));

  REQUIRE_THROWS_AS(vet_check(log, 14, vet, 20), std::invalid_argument);
}

TEST_CASE("vet check falls back to the nearest earlier snapshot") {
  PolicySnapshotLog log;
  log.put(4, make_policy({0.5, 0.5}));
  log.put(12, make_policy({0.5, 0.5}));
  VetConfig vet;
  vet.min_ratio = 0.2;
  vet.epsilon = 0.5;
  vet.check_every = 4;
  // floor(12/2)=6 has no snapshot; 4 is the nearest one below it.
  REQUIRE(vet_check(log, 12, vet, 20));
}

TEST_CASE("huge epsilon terminates exactly at the minimum budget") {
  const BanditState bandit{BanditArms::make({0.9, 0.6, 0.3})};
  const BanditEvaluator eval;
  SearchConfig cfg = plain_config();
  cfg.budget = 50;
  cfg.seed = 31;
  VetConfig vet;
  vet.min_ratio = 0.2;
  vet.epsilon = 1e9;

  const SearchOutcome out = search_vmcts(bandit, eval, cfg, vet);
  REQUIRE(out.terminated_early);
  REQUIRE(out.iterations_used == min_budget(0.2, 50));
  REQUIRE(out.iterations_used == 10);
}

TEST_CASE("epsilon zero reproduces the vanilla search bit for bit") {
  const TicTacToeState root = TicTacToeState{}.apply(4);
  const RolloutEvaluator<TicTacToeState> eval(6);
  SearchConfig cfg;
  cfg.budget = 50;
  cfg.two_player = true;
  VetConfig vet;
  vet.epsilon = 0.0;

  for (std::uint64_t seed : {1ULL, 9ULL, 77ULL}) {
    cfg.seed = seed;
    const SearchOutcome vanilla = search_vanilla(root, eval, cfg);
    const SearchOutcome adaptive = search_vmcts(root, eval, cfg, vet);
    REQUIRE(adaptive.policy.probabilities == vanilla.policy.probabilities);
    REQUIRE(adaptive.policy.support == vanilla.policy.support);
    REQUIRE(adaptive.chosen_action == vanilla.chosen_action);
    REQUIRE(adaptive.iterations_used == cfg.budget);
    REQUIRE(!adaptive.terminated_early);
  }
}

TEST_CASE("termination respects the minimum budget floor") {
  const BanditState bandit{BanditArms::make({0.8, 0.5, 0.45, 0.3})};
  const BanditEvaluator eval;
  SearchConfig cfg = plain_config();
  cfg.budget = 60;
  VetConfig vet;
  vet.min_ratio = 0.3;
  vet.epsilon = 0.15;
  const int k_min = min_budget(vet.min_ratio, cfg.budget);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const SearchOutcome out = search_vmcts(bandit, eval, cfg, vet);
    if (out.terminated_early) {
      REQUIRE(out.iterations_used >= k_min);
      REQUIRE(out.iterations_used < cfg.budget);
    } else {
      REQUIRE(out.iterations_used == cfg.budget);
    }
  }
}

TEST_CASE("budget used is non-increasing in epsilon") {
  const BanditState bandit{BanditArms::make({0.85, 0.6, 0.5, 0.2})};
  const BanditEvaluator eval;
  SearchConfig cfg = plain_config();
  cfg.budget = 80;
  const double grid[] = {0.0, 0.05, 0.1, 0.2, 0.5};

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    int previous = std::numeric_limits<int>::max();
    for (const double eps : grid) {
      VetConfig vet;
      vet.epsilon = eps;
      const SearchOutcome out = search_vmcts(bandit, eval, cfg, vet);
      REQUIRE(out.iterations_used <= previous);
      previous = out.iterations_used;
    }
  }
}

TEST_CASE("virtual policy at full budget equals the visitation policy") {
  const TicTacToeState root;
  const RolloutEvaluator<TicTacToeState> eval(4);
  SearchConfig cfg;
  cfg.budget = 35;
  cfg.seed = 8;
  SearchTree tree;
  Rng rng(cfg.seed);
  detail::setup_root(tree, root, eval, cfg, rng);
  for (int k = 0; k < cfg.budget; ++k) run_iteration(tree, root, eval, cfg, rng);

  const Policy from_counts = virtual_policy(virtual_expand(tree, cfg, cfg.budget), cfg.budget);
  const Policy from_visits = visitation_policy(tree);
  REQUIRE(from_counts.probabilities == from_visits.probabilities);
  REQUIRE(from_counts.support == from_visits.support);
}

TEST_CASE("greedy expansion dumps the remainder on the current best") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {0.5, 0.5});
  const auto children = tree.children(tree.root());
  set_edge(tree, children[0].node, 2, 0.1);
  set_edge(tree, children[1].node, 1, 0.9);

  const Policy p = greedy_expand(tree, 5);
  REQUIRE(p.probabilities == std::vector<double>{0.8, 0.2});

  // At full budget greedy matches the plain visitation distribution.
  const Policy full = greedy_expand(tree, 3);
  REQUIRE(full.probabilities == std::vector<double>{2.0 / 3, 1.0 / 3});

  REQUIRE_THROWS_AS(greedy_expand(tree, 2), std::invalid_argument);
}

TEST_CASE("greedy expansion breaks count ties toward the lowest action") {
  SearchTree tree;
  expand_with_priors(tree, tree.root(), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (const auto& edge : tree.children(tree.root())) set_edge(tree, edge.node, 1, 0.0);
  const Policy p = greedy_expand(tree, 6);
  REQUIRE(p.probabilities == std::vector<double>{4.0 / 6, 1.0 / 6, 1.0 / 6});
}

TEST_CASE("truncated search stops at k_stop") {
  const TicTacToeState root;
  const RolloutEvaluator<TicTacToeState> eval(4);
  SearchConfig cfg;
  cfg.budget = 50;
  cfg.seed = 4;
  const SearchOutcome out = truncated_vanilla(root, eval, cfg, 12);
  REQUIRE(out.iterations_used == 12);
  REQUIRE(!out.terminated_early);
  double total = 0.0;
  for (double p : out.policy.probabilities) total += p;
  REQUIRE(total == Catch::Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_AS(truncated_vanilla(root, eval, cfg, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(truncated_vanilla(root, eval, cfg, 51), std::invalid_argument);
}

TEST_CASE("oracle continuation recovers the uninterrupted run") {
  const TicTacToeState root = TicTacToeState{}.apply(0);
  const RolloutEvaluator<TicTacToeState> eval(6);
  SearchConfig cfg;
  cfg.budget = 40;
  cfg.seed = 99;
  cfg.capture_snapshot = true;

  const SearchOutcome truncated = truncated_vanilla(root, eval, cfg, 15);
  REQUIRE(truncated.snapshot != nullptr);
  const auto before = truncated.snapshot->tree.snapshot_stats();

  const Policy oracle = continue_to_oracle(*truncated.snapshot, root, eval, cfg);
  REQUIRE(truncated.snapshot->tree.snapshot_stats() == before);  // clone only

  const SearchOutcome full = search_vanilla(root, eval, cfg);
  REQUIRE(oracle.probabilities == full.policy.probabilities);
  REQUIRE(oracle.support == full.policy.support);
}

TEST_CASE("trace rows carry distances and the termination marker") {
  const BanditState bandit{BanditArms::make({0.9, 0.4, 0.2})};
  const BanditEvaluator eval;
  SearchConfig cfg = plain_config();
  cfg.budget = 40;
  cfg.seed = 6;
  cfg.record_trace = true;
  VetConfig vet;
  vet.epsilon = 0.2;

  const SearchOutcome out = search_vmcts(bandit, eval, cfg, vet);
  REQUIRE(!out.trace.empty());
  REQUIRE(out.trace.front().iteration == 1);
  REQUIRE(std::isnan(out.trace.front().delta_l1));  // no half snapshot yet
  const auto& last = out.trace.back();
  REQUIRE(last.terminated == out.terminated_early);
  if (out.terminated_early) {
    REQUIRE(last.iteration == out.iterations_used);
    REQUIRE(last.delta_l1 < vet.epsilon);
    REQUIRE(last.delta_l2 <= last.delta_l1 + 1e-15);
  }
  for (const auto& row : out.trace) REQUIRE(row.virtual_time_ns >= 0);
}
