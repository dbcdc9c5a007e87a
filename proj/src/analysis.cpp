#include "planq/analysis.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

namespace planq {

RelaxedExplorer::RelaxedExplorer(const GroundTask& task) : task_(task), pre_of_(task.num_atoms()) {
  for (const auto& a : task.actions) {
    if (a.pre.empty()) no_pre_.push_back(a.id);
    for (auto p : a.pre) pre_of_[p].push_back(a.id);
  }
}

RelaxedReachability RelaxedExplorer::explore(const State& s, const std::vector<bool>* excluded) const {
  RelaxedReachability r{s, s, std::vector<bool>(task_.num_actions(), false)};
  std::vector<std::uint32_t> remaining(task_.num_actions());
  for (const auto& a : task_.actions) remaining[a.id] = static_cast<std::uint32_t>(a.pre.size());

  std::vector<AtomId> queue = s.to_vector();
  auto fire = [&](ActionId a) {
    if (excluded != nullptr && (*excluded)[a]) return;
    r.reachable_actions[a] = true;
    for (auto x : task_.actions[a].add) {
      if (!r.reachable_atoms.contains(x)) {
        r.reachable_atoms.insert(x);
        queue.push_back(x);
      }
    }
  };
  for (auto a : no_pre_) fire(a);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (auto a : pre_of_[queue[head]])
      if (--remaining[a] == 0) fire(a);
  }
  return r;
}

long RelaxedExplorer::h_add(const State& s) const {
  constexpr long inf = std::numeric_limits<long>::max();
  std::vector<long> cost(task_.num_atoms(), inf);
  std::vector<std::uint32_t> remaining(task_.num_actions());
  std::vector<long> acc(task_.num_actions(), 0);
  for (const auto& a : task_.actions) remaining[a.id] = static_cast<std::uint32_t>(a.pre.size());

  using Entry = std::pair<long, AtomId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  s.for_each([&](AtomId p) {
    cost[p] = 0;
    open.emplace(0, p);
  });
  auto fire = [&](ActionId a) {
    const long c = acc[a] + 1;
    for (auto x : task_.actions[a].add) {
      if (c < cost[x]) {
        cost[x] = c;
        open.emplace(c, x);
      }
    }
  };
  for (auto a : no_pre_) fire(a);
  std::vector<bool> closed(task_.num_atoms(), false);
  while (!open.empty()) {
    auto [c, p] = open.top();
    open.pop();
    if (closed[p]) continue;
    closed[p] = true;
    for (auto a : pre_of_[p]) {
      acc[a] += c;
      if (--remaining[a] == 0) fire(a);
    }
  }
  long h = 0;
  for (auto g : task_.goal_order) {
    if (cost[g] == inf) return -1;
    h += cost[g];
  }
  return h;
}

RelaxedReachability relaxed_reachable(const GroundTask& task, const State& s) {
  return RelaxedExplorer(task).explore(s);
}

MutexSet::MutexSet(std::size_t universe, std::vector<std::pair<AtomId, AtomId>> pairs)
    : n_(universe), pairs_(std::move(pairs)) {
  for (auto& [p, q] : pairs_)
    if (q < p) std::swap(p, q);
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool MutexSet::is_mutex(AtomId p, AtomId q) const {
  if (q < p) std::swap(p, q);
  return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(p, q));
}

MutexSet compute_mutexes(const GroundTask& task) {
  // Static atoms are constant in every reachable state, so the fixpoint runs
  // over the dynamic atoms that survived grounding.
  std::vector<int> local(task.num_atoms(), -1);
  std::vector<AtomId> global;
  for (AtomId a = 0; a < task.num_atoms(); ++a) {
    if (task.dynamic.contains(a) && !task.pruned[a]) {
      local[a] = static_cast<int>(global.size());
      global.push_back(a);
    }
  }
  const std::size_t m = global.size();
  std::vector<bool> single(m, false);
  std::vector<bool> pair(m * m, false);
  auto has = [&](std::size_t p, std::size_t q) { return p == q ? single[p] : pair[p * m + q]; };
  auto put = [&](std::size_t p, std::size_t q) {
    if (p == q || pair[p * m + q]) return false;
    pair[p * m + q] = pair[q * m + p] = true;
    return true;
  };

  struct Op {
    std::vector<std::size_t> pre, add;
    std::vector<bool> touches;  // add ∪ del, local ids
  };
  std::vector<Op> ops;
  for (const auto& a : task.actions) {
    Op op;
    bool dead = false;
    for (auto p : a.pre) {
      if (local[p] >= 0) op.pre.push_back(local[p]);
      else if (!task.init.contains(p)) dead = true;
    }
    if (dead) continue;
    op.touches.assign(m, false);
    for (auto x : a.add)
      if (local[x] >= 0) {
        op.add.push_back(local[x]);
        op.touches[local[x]] = true;
      }
    for (auto x : a.del)
      if (local[x] >= 0) op.touches[local[x]] = true;
    ops.push_back(std::move(op));
  }

  std::vector<std::size_t> init_local;
  task.init.for_each([&](AtomId a) {
    if (local[a] >= 0) init_local.push_back(local[a]);
  });
  for (auto p : init_local) single[p] = true;
  for (auto p : init_local)
    for (auto q : init_local) put(p, q);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& op : ops) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < op.pre.size(); ++i)
        for (std::size_t j = i; ok && j < op.pre.size(); ++j) ok = has(op.pre[i], op.pre[j]);
      if (!ok) continue;
      for (auto p : op.add) {
        if (!single[p]) {
          single[p] = true;
          changed = true;
        }
        for (auto q : op.add) changed |= put(p, q);
      }
      for (std::size_t q = 0; q < m; ++q) {
        if (!single[q] || op.touches[q]) continue;
        bool compatible = true;
        for (auto r : op.pre)
          if (!has(q, r)) {
            compatible = false;
            break;
          }
        if (!compatible) continue;
        for (auto p : op.add) changed |= put(p, q);
      }
    }
  }

  std::vector<std::pair<AtomId, AtomId>> out;
  for (std::size_t p = 0; p < m; ++p)
    for (std::size_t q = p + 1; q < m; ++q)
      if (single[p] && single[q] && !pair[p * m + q]) out.emplace_back(global[p], global[q]);
  return MutexSet(task.num_atoms(), std::move(out));
}

LandmarkSet landmarks_rhw(const GroundTask& task, const State& s) {
  LandmarkSet out{s, task.empty_set(), false, {}};
  RelaxedExplorer ex(task);
  if (!task.goal.is_subset_of(ex.explore(s).reachable_atoms)) {
    out.goal_unreachable = true;
    return out;
  }
  std::vector<std::vector<ActionId>> adders(task.num_atoms());
  for (const auto& a : task.actions)
    for (auto x : a.add) adders[x].push_back(a.id);

  std::deque<AtomId> queue;
  for (auto g : task.goal_order) {
    if (!s.contains(g) && !out.landmarks.contains(g)) {
      out.landmarks.insert(g);
      out.parent[g] = g;
      queue.push_back(g);
    }
  }
  std::vector<bool> excluded(task.num_actions(), false);
  while (!queue.empty()) {
    const AtomId p = queue.front();
    queue.pop_front();
    for (auto a : adders[p]) excluded[a] = true;
    const auto without = ex.explore(s, &excluded);
    for (auto a : adders[p]) excluded[a] = false;

    std::optional<AtomSet> shared;
    for (auto a : adders[p]) {
      const auto& pre = task.actions[a].pre;
      if (!std::all_of(pre.begin(), pre.end(), [&](AtomId q) { return without.reachable_atoms.contains(q); }))
        continue;
      AtomSet pre_set = task.empty_set();
      for (auto q : pre) pre_set.insert(q);
      if (shared) *shared &= pre_set;
      else shared = std::move(pre_set);
    }
    if (!shared) continue;
    shared->for_each([&](AtomId q) {
      if (!s.contains(q) && !out.landmarks.contains(q)) {
        out.landmarks.insert(q);
        out.parent[q] = p;
        queue.push_back(q);
      }
    });
  }
  return out;
}

std::map<AtomId, std::size_t> landmark_negatives(const GroundTask& task, const State& s,
                                                 std::span<const Plan> plans) {
  std::map<AtomId, std::size_t> out;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto r = apply_actions(task, s, plans[i].actions);
    if (!r.verdict.goal_reaching) throw ContractViolation("landmark_negatives: plan " + std::to_string(i) + " is not a plan");
    AtomSet seen = s;
    State cur = s;
    for (auto a : plans[i].actions) {
      cur = progress(task, cur, a);
      seen |= cur;
    }
    for (AtomId p = 0; p < task.num_atoms(); ++p)
      if (!seen.contains(p)) out.emplace(p, i);
  }
  return out;
}

bool justification_check(const GroundTask& task, const State& s, std::span<const ActionId> plan, Removal r) {
  if (r.count != 1 && r.count != 2) throw ContractViolation("justification_check: removal must be one or two actions");
  if (r.index + r.count > plan.size()) throw ContractViolation("justification_check: removal out of range");
  std::vector<ActionId> reduced(plan.begin(), plan.begin() + static_cast<std::ptrdiff_t>(r.index));
  reduced.insert(reduced.end(), plan.begin() + static_cast<std::ptrdiff_t>(r.index + r.count), plan.end());
  return apply_actions(task, s, reduced).verdict.goal_reaching;
}

std::vector<ActionId> truncate_after_goal(const GroundTask& task, const State& s, std::span<const ActionId> plan) {
  std::vector<ActionId> original(plan.begin(), plan.end());
  const auto trace = state_trace(task, s, plan);
  std::size_t first = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (is_goal(task, trace[i])) {
      first = i;
      break;
    }
  if (first == trace.size()) return original;
  const std::size_t cut = std::min(plan.size(), first + 2);
  if (!is_goal(task, trace[cut])) return original;
  original.resize(cut);
  return original;
}

}  // namespace planq
