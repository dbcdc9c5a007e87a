#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "planq/analysis.hpp"
#include "planq/oracle.hpp"
#include "planq/plan.hpp"

namespace planq {

struct SampleConfig {
  std::size_t num_plans = 20;
  std::size_t rollout_depth = 5;
  std::size_t rollouts_per_state = 2;
  std::uint64_t seed = 0;
  std::size_t state_cap = 200;
};

struct PlanSearchOptions {
  /// Plans up to shortest + slack actions long are enumerated when an
  /// oracle index covers the root state.
  std::size_t slack = 2;
  std::size_t enumeration_limit = 10'000;
  /// Randomized greedy best-first fallback.
  std::size_t max_restarts = 0;  // 0 = 4 * k
  std::size_t expansion_limit = 50'000;
  const OracleIndex* oracle = nullptr;
};

struct PlanSearchResult {
  std::vector<Plan> plans;
  bool goal_unreachable = false;  // relaxed-unreachable goal
};

/// Up to k distinct plans from s, deterministic under seed. A shortest
/// plan comes first when the oracle index covers s.
PlanSearchResult find_plans(const GroundTask& task, const State& s, std::size_t k, std::uint64_t seed,
                            const PlanSearchOptions& options = {});

struct SampledState {
  State state;
  bool on_plan = false;   // visited by one of the input plans
  bool dead_end = false;  // goal provably unreachable (delete relaxation)
};

/// Plan trace states plus states visited by random rollouts from each of
/// them; deduplicated, then capped by seeded subsampling. Order: first
/// discovery order, preserved through the cap.
std::vector<SampledState> sample_states(const GroundTask& task, const std::vector<Plan>& plans,
                                        const SampleConfig& cfg);

/// Uniform random walk over applicable actions; stops early at dead ends.
/// Returns s followed by every visited state.
std::vector<State> random_rollout(const GroundTask& task, const State& s, std::size_t depth, std::uint64_t seed);

}  // namespace planq
