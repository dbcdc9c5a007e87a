#include "planq/oracle.hpp"

#include <algorithm>
#include <functional>

namespace planq {

OracleIndex OracleIndex::build(const GroundTask& task, const State& root, std::size_t cap) {
  OracleIndex ix;
  ix.task_ = &task;
  auto add = [&](const State& s, int depth) -> Node {
    auto [it, fresh] = ix.index_.emplace(s, static_cast<Node>(ix.states_.size()));
    if (fresh) {
      ix.states_.push_back(s);
      ix.edges_.emplace_back();
      ix.depth_.push_back(depth);
    }
    return it->second;
  };
  add(root, 0);
  for (Node head = 0; head < ix.states_.size(); ++head) {
    const State s = ix.states_[head];
    std::vector<std::pair<ActionId, Node>> out;
    for (auto a : applicable_actions(task, s)) {
      State t = progress(task, s, a);
      if (ix.states_.size() >= cap && !ix.index_.contains(t)) {
        ix.truncated_ = true;
        continue;
      }
      out.emplace_back(a, add(t, ix.depth_[head] + 1));
    }
    ix.edges_[head] = std::move(out);
  }

  // Goal distances by reverse breadth-first search over stored edges.
  const std::size_t n = ix.states_.size();
  std::vector<std::vector<Node>> reverse(n);
  for (Node u = 0; u < n; ++u)
    for (auto [a, v] : ix.edges_[u]) reverse[v].push_back(u);
  ix.dist_.assign(n, kUnreachable);
  std::vector<Node> queue;
  for (Node u = 0; u < n; ++u)
    if (is_goal(task, ix.states_[u])) {
      ix.dist_[u] = 0;
      queue.push_back(u);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Node v = queue[head];
    for (auto u : reverse[v])
      if (ix.dist_[u] == kUnreachable) {
        ix.dist_[u] = ix.dist_[v] + 1;
        queue.push_back(u);
      }
  }
  return ix;
}

std::optional<OracleIndex::Node> OracleIndex::find(const State& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<OracleIndex::Node> OracleIndex::reachable_from(Node n) const {
  std::vector<bool> seen(states_.size(), false);
  std::vector<Node> order{n};
  seen[n] = true;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (auto [a, v] : edges_[order[head]])
      if (!seen[v]) {
        seen[v] = true;
        order.push_back(v);
      }
  return order;
}

namespace {

Tri search(const OracleIndex& ix, OracleIndex::Node from, const std::function<bool(OracleIndex::Node)>& hit) {
  for (auto v : ix.reachable_from(from))
    if (hit(v)) return Tri::yes;
  return ix.truncated() ? Tri::unknown : Tri::no;
}

}  // namespace

Tri OracleIndex::atom_reachable(Node from, AtomId p) const {
  return search(*this, from, [&](Node v) { return states_[v].contains(p); });
}

Tri OracleIndex::pair_coreachable(Node from, AtomId p, AtomId q) const {
  return search(*this, from, [&](Node v) { return states_[v].contains(p) && states_[v].contains(q); });
}

Tri OracleIndex::action_applicable_somewhere(Node from, ActionId a) const {
  return search(*this, from, [&](Node v) { return is_applicable(*task_, states_[v], a); });
}

Tri OracleIndex::goal_reachable(Node from) const {
  if (dist_[from] != kUnreachable) return Tri::yes;
  return truncated_ ? Tri::unknown : Tri::no;
}

Tri OracleIndex::is_landmark(Node from, AtomId p) const {
  if (states_[from].contains(p)) return Tri::yes;
  if (goal_reachable(from) != Tri::yes) return truncated_ ? Tri::unknown : Tri::yes;
  std::vector<bool> seen(states_.size(), false);
  std::vector<Node> queue{from};
  seen[from] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Node u = queue[head];
    if (is_goal(*task_, states_[u])) return Tri::no;
    for (auto [a, v] : edges_[u])
      if (!seen[v] && !states_[v].contains(p)) {
        seen[v] = true;
        queue.push_back(v);
      }
  }
  return truncated_ ? Tri::unknown : Tri::yes;
}

std::optional<std::vector<ActionId>> OracleIndex::shortest_plan(Node from) const {
  if (dist_[from] == kUnreachable) return std::nullopt;
  std::vector<ActionId> plan;
  Node u = from;
  while (dist_[u] != 0) {
    for (auto [a, v] : edges_[u])
      if (dist_[v] == dist_[u] - 1) {
        plan.push_back(a);
        u = v;
        break;
      }
  }
  return plan;
}

std::vector<std::vector<ActionId>> OracleIndex::enumerate_plans(Node from, std::size_t max_len,
                                                               std::size_t limit) const {
  std::vector<std::vector<ActionId>> out;
  std::vector<ActionId> path;
  std::function<void(Node)> dfs = [&](Node u) {
    if (out.size() >= limit) return;
    if (dist_[u] == 0) out.push_back(path);
    if (path.size() == max_len) return;
    for (auto [a, v] : edges_[u]) {
      if (out.size() >= limit) return;
      if (dist_[v] == kUnreachable || path.size() + 1 + static_cast<std::size_t>(dist_[v]) > max_len) continue;
      path.push_back(a);
      dfs(v);
      path.pop_back();
    }
  };
  if (dist_[from] != kUnreachable) dfs(from);
  return out;
}

}  // namespace planq
