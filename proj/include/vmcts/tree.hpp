#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "vmcts/common.hpp"

namespace vmcts {

/// Statistics of the edge leading into a node: visit count N(s,a), running
/// value sum, prior P(s,a), immediate reward R(s,a) and whether the node has
/// been expanded with children of its own.
struct NodeStats {
  int visit_count = 0;
  double value_sum = 0.0;
  double prior = 0.0;
  double reward = 0.0;
  bool expanded = false;

  /// Mean backed-up value; only meaningful when visit_count > 0.
  double mean() const {
    if (visit_count <= 0) throw std::logic_error("NodeStats::mean: unvisited node");
    return value_sum / static_cast<double>(visit_count);
  }

  bool operator==(const NodeStats&) const = default;
};

/// Running extremes of all backed-up mean values, used to rescale Q into
/// [0,1] inside the selection formula when normalization is enabled.
struct MinMaxBounds {
  double min_q = std::numeric_limits<double>::infinity();
  double max_q = -std::numeric_limits<double>::infinity();

  void update(double q) {
    min_q = std::min(min_q, q);
    max_q = std::max(max_q, q);
  }

  /// Maps q into [0,1] relative to the observed range. Returns q unchanged
  /// until two distinct values have been seen.
  double normalize(double q) const {
    if (max_q <= min_q) return q;
    return std::clamp((q - min_q) / (max_q - min_q), 0.0, 1.0);
  }

  bool operator==(const MinMaxBounds&) const = default;
};

struct ChildEdge {
  Action action = 0;
  NodeId node = kNoNode;

  bool operator==(const ChildEdge&) const = default;
};

/// Arena-allocated search tree. Node 0 is always the root; children are
/// created when their parent is expanded and stay in ascending action order.
/// Copying the tree copies every statistic, so clones can be continued
/// independently of the original.
class SearchTree {
 public:
  SearchTree() { nodes_.emplace_back(); }

  NodeId root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }

  const NodeStats& stats(NodeId id) const { return node(id).stats; }
  NodeStats& stats(NodeId id) { return node(id).stats; }

  NodeId parent(NodeId id) const { return node(id).parent; }
  bool is_root(NodeId id) const { return check(id) == 0; }

  std::span<const ChildEdge> children(NodeId id) const {
    const auto& c = node(id).children;
    return {c.data(), c.size()};
  }

  /// Child node reached by taking `action`, or kNoNode.
  NodeId child(NodeId id, Action action) const {
    for (const auto& edge : node(id).children)
      if (edge.action == action) return edge.node;
    return kNoNode;
  }

  /// Creates all children of `id` from (action, prior) pairs and marks the
  /// node expanded. Actions must arrive in ascending order.
  void expand(NodeId id, std::span<const Action> actions, std::span<const double> priors) {
    Node& n = node(id);
    if (n.stats.expanded) throw std::invalid_argument("SearchTree::expand: already expanded");
    if (actions.size() != priors.size() || actions.empty())
      throw std::invalid_argument("SearchTree::expand: bad action/prior lists");
    n.children.reserve(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (i > 0 && actions[i] <= actions[i - 1])
        throw std::invalid_argument("SearchTree::expand: actions not ascending");
      const NodeId cid = static_cast<NodeId>(nodes_.size());
      nodes_.emplace_back();
      nodes_.back().parent = id;
      nodes_.back().stats.prior = priors[i];
      node(id).children.push_back({actions[i], cid});
    }
    node(id).stats.expanded = true;
  }

  /// Sum of child visit counts; at the root this equals the number of
  /// completed search iterations.
  int child_visit_total(NodeId id) const {
    int total = 0;
    for (const auto& edge : node(id).children) total += stats(edge.node).visit_count;
    return total;
  }

  const MinMaxBounds& bounds() const { return bounds_; }
  MinMaxBounds& bounds() { return bounds_; }

  /// Flattened copy of every per-node statistic, in arena order. Used by
  /// purity checks that assert an operation left the tree untouched.
  std::vector<NodeStats> snapshot_stats() const {
    std::vector<NodeStats> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.stats);
    return out;
  }

  bool operator==(const SearchTree&) const = default;

 private:
  struct Node {
    NodeStats stats;
    NodeId parent = kNoNode;
    std::vector<ChildEdge> children;

    bool operator==(const Node&) const = default;
  };

  NodeId check(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw std::invalid_argument("SearchTree: unknown node id");
    return id;
  }

  Node& node(NodeId id) { return nodes_[check(id)]; }
  const Node& node(NodeId id) const { return nodes_[check(id)]; }

  std::vector<Node> nodes_;
  MinMaxBounds bounds_;
};

/// Scratch visit counts over the root's children, advanced during virtual
/// expansion while the tree itself stays frozen. Entries are aligned with
/// the root's child order.
struct VirtualRootCounts {
  std::vector<Action> actions;
  std::vector<int> counts;
  long total = 0;

  int count_of(std::size_t child_index) const { return counts[child_index]; }

  void bump(std::size_t child_index) {
    ++counts[child_index];
    ++total;
  }
};

/// Initializes scratch counts from the real root visitation.
inline VirtualRootCounts root_counts(const SearchTree& tree) {
  VirtualRootCounts out;
  for (const auto& edge : tree.children(tree.root())) {
    out.actions.push_back(edge.action);
    out.counts.push_back(tree.stats(edge.node).visit_count);
    out.total += tree.stats(edge.node).visit_count;
  }
  return out;
}

/// Substitute Q-value for the unvisited children of `id`, following the
/// recursion
///   qbar(root)  = (0 + sum of visited child means) / (1 + #visited)
///   qbar(s)     = (qbar(parent) + sum of visited child means) / (1 + #visited).
inline double unvisited_q_default(const SearchTree& tree, NodeId id) {
  // Collect the chain root -> id, then fold the recursion downwards.
  std::vector<NodeId> chain;
  for (NodeId cur = id; cur != kNoNode; cur = tree.parent(cur)) chain.push_back(cur);
  std::reverse(chain.begin(), chain.end());
  if (chain.front() != tree.root())
    throw std::invalid_argument("unvisited_q_default: node not connected to root");

  double qbar = 0.0;
  for (NodeId cur : chain) {
    double sum = 0.0;
    int visited = 0;
    for (const auto& edge : tree.children(cur)) {
      const NodeStats& s = tree.stats(edge.node);
      if (s.visit_count > 0) {
        sum += s.mean();
        ++visited;
      }
    }
    qbar = (qbar + sum) / static_cast<double>(1 + visited);
  }
  return qbar;
}

/// Backs up `leaf_value` along `path` (root first, evaluated node last).
/// Each node on the path receives one visit; in two-player mode the value
/// flips sign at every ply so each node stores values from the perspective
/// of the player who moved into it.
inline void backpropagate(SearchTree& tree, std::span<const NodeId> path, double leaf_value,
                          bool two_player, double discount) {
  if (path.empty()) throw std::invalid_argument("backpropagate: empty path");
  double value = leaf_value;
  for (std::size_t i = path.size(); i-- > 0;) {
    NodeStats& s = tree.stats(path[i]);
    s.value_sum += value;
    s.visit_count += 1;
    tree.bounds().update(s.mean());
    value = s.reward + discount * (two_player ? -value : value);
  }
}

}  // namespace vmcts
