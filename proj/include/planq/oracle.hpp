#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "planq/transition.hpp"

namespace planq {

/// Three-valued answer: truncated indices cannot certify negatives.
enum class Tri { no, yes, unknown };

/// Explicit state space reachable from a root, explored breadth-first up
/// to a state cap. Edges and goal distances are stored so queries from
/// any explored state run as walks over the stored graph.
class OracleIndex {
 public:
  using Node = std::uint32_t;
  static constexpr int kUnreachable = -1;

  static OracleIndex build(const GroundTask& task, const State& root, std::size_t cap = 1'000'000);

  bool truncated() const { return truncated_; }
  std::size_t num_states() const { return states_.size(); }
  const State& state(Node n) const { return states_[n]; }
  std::optional<Node> find(const State& s) const;
  /// Successor edges in action id order. In a truncated index, edges to
  /// states beyond the cap are missing.
  const std::vector<std::pair<ActionId, Node>>& successors(Node n) const { return edges_[n]; }
  /// Length of a shortest path to a goal state; kUnreachable if none.
  int goal_distance(Node n) const { return dist_[n]; }
  int depth(Node n) const { return depth_[n]; }

  /// Nodes reachable from n (n included), in BFS order.
  std::vector<Node> reachable_from(Node n) const;

  Tri atom_reachable(Node from, AtomId p) const;
  Tri pair_coreachable(Node from, AtomId p, AtomId q) const;
  Tri action_applicable_somewhere(Node from, ActionId a) const;
  Tri goal_reachable(Node from) const;
  /// Exact landmark test: yes iff no goal state is reachable from `from`
  /// through states that all lack p. Unknown on truncated indices.
  Tri is_landmark(Node from, AtomId p) const;

  std::optional<std::vector<ActionId>> shortest_plan(Node from) const;

  /// Every action sequence of length <= max_len from `from` that ends in a
  /// goal state, in depth-first action-id order, stopping after `limit`.
  std::vector<std::vector<ActionId>> enumerate_plans(Node from, std::size_t max_len, std::size_t limit) const;

  const GroundTask& task() const { return *task_; }

 private:
  const GroundTask* task_ = nullptr;
  bool truncated_ = false;
  std::vector<State> states_;
  std::unordered_map<State, Node, AtomSetHash> index_;
  std::vector<std::vector<std::pair<ActionId, Node>>> edges_;
  std::vector<int> dist_;
  std::vector<int> depth_;
};

}  // namespace planq
