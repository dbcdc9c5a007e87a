#include <algorithm>
#include <numeric>
#include <set>

#include "planq/rng.hpp"
#include "planq/taskgen.hpp"

namespace planq {

namespace {

std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string dedup_key(const QuestionRecord& r) { return r.context + '\x1f' + r.question; }

void position_gold(QuestionRecord& r, std::size_t pos, Rng& rng) {
  std::vector<int> others;
  for (int i = 0; i < 4; ++i)
    if (i != r.gold_index) others.push_back(i);
  rng.shuffle(others);
  std::array<int, 4> order{};
  for (std::size_t i = 0, k = 0; i < 4; ++i) order[i] = i == pos ? r.gold_index : others[k++];
  place_options(r, order);
}

}  // namespace

BatchResult assemble_batch(const std::vector<DomainProblems>& domains, const GenBatch& cfg) {
  BatchResult out;
  std::set<std::string> seen;
  for (const auto& dom : domains) {
    const std::uint64_t dh = name_hash(dom.domain);
    std::vector<std::vector<SampledState>> states;
    for (std::size_t p = 0; p < dom.problems.size(); ++p) {
      const auto& ctx = *dom.problems[p];
      const State init = ctx.task().init;
      const auto plans = ctx.plans_from(init, child_seed(cfg.seed, {dh, p, 1}));
      SampleConfig sc = cfg.sample;
      sc.seed = child_seed(cfg.seed, {dh, p, 2});
      auto sampled = sample_states(ctx.task(), plans.plans, sc);
      Rng(child_seed(cfg.seed, {dh, p, 3})).shuffle(sampled);
      states.push_back(std::move(sampled));
    }
    std::size_t rounds = 0;
    for (const auto& v : states) rounds = std::max(rounds, v.size());

    for (auto task : cfg.tasks) {
      for (auto qtype : cfg.qtypes) {
        const auto th = static_cast<std::uint64_t>(task), qh = static_cast<std::uint64_t>(qtype);
        const std::size_t want = cfg.per_domain;
        Rng cell_rng(child_seed(cfg.seed, {dh, th, qh, 0xce11}));
        const std::size_t want_yes = want % 2 == 1 && cell_rng.coin() ? want / 2 + 1 : want / 2;
        const std::size_t want_no = want - want_yes;

        std::vector<QuestionRecord> pool;
        std::set<std::string> local;
        std::size_t yes = 0, no = 0;
        auto done = [&] { return qtype == QType::mcq ? pool.size() >= want : yes >= want_yes && no >= want_no; };
        for (std::size_t r = 0; r < rounds && !done(); ++r) {
          for (std::size_t p = 0; p < states.size() && !done(); ++p) {
            if (r >= states[p].size()) continue;
            const auto seed = child_seed(cfg.seed, {dh, p, th, qh, r});
            for (auto& rec : generate_for_state(task, *dom.problems[p], states[p][r].state, seed, qtype)) {
              const auto key = dedup_key(rec);
              if (seen.contains(key) || !local.insert(key).second) continue;
              if (qtype == QType::boolean) {
                if ((rec.gold_yes ? yes : no) >= (rec.gold_yes ? want_yes : want_no)) continue;
                ++(rec.gold_yes ? yes : no);
              }
              pool.push_back(std::move(rec));
              if (qtype == QType::mcq && pool.size() >= want) break;
            }
          }
        }

        std::vector<QuestionRecord> chosen;
        if (qtype == QType::boolean) {
          // Keep labels within one of each other even when short.
          std::size_t keep_yes = std::min(yes, no + 1), keep_no = std::min(no, yes + 1);
          for (auto& rec : pool) {
            auto& budget = rec.gold_yes ? keep_yes : keep_no;
            if (budget == 0) continue;
            --budget;
            chosen.push_back(std::move(rec));
          }
        } else {
          chosen = std::move(pool);
          for (std::size_t i = 0; i < chosen.size(); ++i) {
            Rng block(child_seed(cfg.seed, {dh, th, qh, 0xb10c, i / 4}));
            std::vector<std::size_t> perm{0, 1, 2, 3};
            block.shuffle(perm);
            Rng rng(child_seed(chosen[i].seed, {0xd15}));
            position_gold(chosen[i], perm[i % 4], rng);
          }
        }
        if (chosen.size() < want) out.under_fills.push_back({dom.domain, task, qtype, want, chosen.size()});
        for (auto& rec : chosen) {
          seen.insert(dedup_key(rec));
          rec.id = record_id(rec);
          out.records.push_back(std::move(rec));
        }
      }
    }
  }
  return out;
}

}  // namespace planq
