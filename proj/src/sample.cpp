#include "planq/sample.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "planq/rng.hpp"

namespace planq {

namespace {

std::optional<std::vector<ActionId>> greedy_search(const GroundTask& task, const RelaxedExplorer& ex,
                                                   const State& start, Rng& rng, std::size_t expansion_limit) {
  struct Node {
    State state;
    std::size_t parent;
    ActionId via;
  };
  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t, AtomSetHash> seen;
  using Key = std::tuple<long, std::uint64_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;

  const long h0 = ex.h_add(start);
  if (h0 < 0) return std::nullopt;
  nodes.push_back({start, 0, 0});
  seen.emplace(start, 0);
  open.emplace(h0, rng.next(), 0);

  std::size_t expansions = 0;
  while (!open.empty() && expansions < expansion_limit) {
    const std::size_t u = std::get<2>(open.top());
    open.pop();
    ++expansions;
    if (is_goal(task, nodes[u].state)) {
      std::vector<ActionId> plan;
      for (std::size_t v = u; v != 0; v = nodes[v].parent) plan.push_back(nodes[v].via);
      std::reverse(plan.begin(), plan.end());
      return plan;
    }
    auto succ = applicable_actions(task, nodes[u].state);
    rng.shuffle(succ);
    for (auto a : succ) {
      State t = progress(task, nodes[u].state, a);
      if (seen.contains(t)) continue;
      const long h = ex.h_add(t);
      const std::size_t id = nodes.size();
      seen.emplace(t, id);
      nodes.push_back({std::move(t), u, a});
      if (h >= 0) open.emplace(h, rng.next(), id);
    }
  }
  return std::nullopt;
}

}  // namespace

PlanSearchResult find_plans(const GroundTask& task, const State& s, std::size_t k, std::uint64_t seed,
                            const PlanSearchOptions& options) {
  PlanSearchResult out;
  RelaxedExplorer ex(task);
  if (!task.goal.is_subset_of(ex.explore(s).reachable_atoms)) {
    out.goal_unreachable = true;
    return out;
  }
  if (k == 0) return out;

  std::vector<std::vector<ActionId>> chosen;
  const OracleIndex* ix = options.oracle;
  std::optional<OracleIndex::Node> node;
  if (ix != nullptr && !ix->truncated()) node = ix->find(s);

  if (node) {
    const auto shortest = ix->shortest_plan(*node);
    if (!shortest) return out;
    auto all = ix->enumerate_plans(*node, shortest->size() + options.slack, options.enumeration_limit);
    chosen.push_back(*shortest);
    std::erase(all, *shortest);
    Rng rng(child_seed(seed, {1}));
    auto pick = rng.sample_indices(all.size(), k - 1);
    std::sort(pick.begin(), pick.end());
    for (auto i : pick) chosen.push_back(std::move(all[i]));
  } else {
    std::set<std::vector<ActionId>> distinct;
    const std::size_t restarts = options.max_restarts == 0 ? 4 * k : options.max_restarts;
    for (std::size_t r = 0; r < restarts && chosen.size() < k; ++r) {
      Rng rng(child_seed(seed, {2, r}));
      std::vector<ActionId> prefix;
      State start = s;
      // Later restarts begin with a short random walk for diversity.
      const std::size_t walk = r == 0 ? 0 : rng.below(4);
      for (std::size_t i = 0; i < walk; ++i) {
        auto app = applicable_actions(task, start);
        if (app.empty()) break;
        const ActionId a = rng.pick(app);
        prefix.push_back(a);
        start = progress(task, start, a);
      }
      auto rest = greedy_search(task, ex, start, rng, options.expansion_limit);
      if (!rest) continue;
      prefix.insert(prefix.end(), rest->begin(), rest->end());
      if (distinct.insert(prefix).second) chosen.push_back(std::move(prefix));
    }
  }
  for (auto& actions : chosen) out.plans.push_back(make_plan(task, s, std::move(actions)));
  return out;
}

std::vector<State> random_rollout(const GroundTask& task, const State& s, std::size_t depth, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<State> out{s};
  for (std::size_t i = 0; i < depth; ++i) {
    auto app = applicable_actions(task, out.back());
    if (app.empty()) break;
    out.push_back(progress(task, out.back(), rng.pick(app)));
  }
  return out;
}

std::vector<SampledState> sample_states(const GroundTask& task, const std::vector<Plan>& plans,
                                        const SampleConfig& cfg) {
  std::vector<SampledState> out;
  std::unordered_map<State, std::size_t, AtomSetHash> index;
  auto add = [&](const State& s, bool on_plan) {
    auto [it, fresh] = index.emplace(s, out.size());
    if (fresh) out.push_back({s, on_plan, false});
  };
  for (const auto& p : plans)
    for (const auto& s : p.trace) add(s, true);
  const std::size_t roots = out.size();
  for (std::size_t i = 0; i < roots; ++i)
    for (std::size_t r = 0; r < cfg.rollouts_per_state; ++r)
      for (auto& s : random_rollout(task, out[i].state, cfg.rollout_depth, child_seed(cfg.seed, {i, r})))
        add(s, false);

  if (out.size() > cfg.state_cap) {
    Rng rng(child_seed(cfg.seed, {0x5eed}));
    auto keep = rng.sample_indices(out.size(), cfg.state_cap);
    std::sort(keep.begin(), keep.end());
    std::vector<SampledState> kept;
    kept.reserve(keep.size());
    for (auto i : keep) kept.push_back(std::move(out[i]));
    out = std::move(kept);
  }
  RelaxedExplorer ex(task);
  for (auto& st : out) st.dead_end = !task.goal.is_subset_of(ex.explore(st.state).reachable_atoms);
  return out;
}

}  // namespace planq
