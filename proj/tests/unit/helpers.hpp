#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "planq/oracle.hpp"
#include "planq/pddl.hpp"
#include "planq/render.hpp"
#include "planq/taskgen.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return PLANQ_DATA_DIR; }
inline std::filesystem::path domains_dir() { return data_dir() / "domains"; }
inline std::filesystem::path test_data() { return PLANQ_TEST_DATA_DIR; }
inline std::filesystem::path golden_dir() { return PLANQ_GOLDEN_DIR; }
inline std::filesystem::path extra_domains() { return test_data() / "domains_extra"; }

inline const std::vector<std::string>& bundled_domains() {
  static const std::vector<std::string> names{"blocksworld", "ferry", "gripper", "swap"};
  return names;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// One problem with everything the generators and checks need.
struct Fixture {
  std::unique_ptr<planq::GroundTask> task;
  std::unique_ptr<planq::Renderer> renderer;
  std::unique_ptr<planq::OracleIndex> oracle;
  std::unique_ptr<planq::ProblemContext> ctx;
};

inline Fixture load_dir(const std::filesystem::path& domain_dir, const std::string& problem, bool with_oracle = true) {
  Fixture f;
  const auto dom = planq::pddl::load_domain((domain_dir / "domain.pddl").string());
  const auto prob = planq::pddl::load_problem((domain_dir / "problems" / problem).string(), dom);
  f.task = std::make_unique<planq::GroundTask>(planq::ground_task(dom, prob));
  f.renderer = std::make_unique<planq::Renderer>(*f.task, planq::TemplateSet::load(domain_dir / "templates.tpl"));
  if (with_oracle) f.oracle = std::make_unique<planq::OracleIndex>(planq::OracleIndex::build(*f.task, f.task->init));
  f.ctx = std::make_unique<planq::ProblemContext>(domain_dir.filename().string(), problem, *f.task, *f.renderer,
                                                 f.oracle.get(), planq::GenOptions{});
  return f;
}

inline Fixture load(const std::string& domain, const std::string& problem, bool with_oracle = true) {
  return load_dir(domains_dir() / domain, problem, with_oracle);
}

/// Naive BFS over states as sorted atom-name sets, using only the ground
/// actions' pre/add/del lists. Independent of OracleIndex.
struct NaiveSpace {
  std::vector<planq::State> states;
};

inline NaiveSpace naive_bfs(const planq::GroundTask& task, const planq::State& root) {
  NaiveSpace out;
  std::set<std::vector<planq::AtomId>> seen;
  std::vector<planq::State> frontier{root};
  seen.insert(root.to_vector());
  while (!frontier.empty()) {
    std::vector<planq::State> next;
    for (const auto& s : frontier) {
      out.states.push_back(s);
      for (const auto& a : task.actions) {
        bool ok = true;
        for (auto p : a.pre) ok = ok && s.contains(p);
        if (!ok) continue;
        planq::State t = s;
        for (auto d : a.del) t.erase(d);
        for (auto d : a.add) t.insert(d);
        if (seen.insert(t.to_vector()).second) next.push_back(t);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace testing_support

namespace testing_support {

inline planq::GroundTask ground_text(const std::string& domain, const std::string& problem) {
  const auto d = planq::pddl::parse_domain(domain);
  return planq::ground_task(d, planq::pddl::parse_problem(problem, d));
}

/// Ferry domain text with an arbitrary problem body, for hand-built cases.
inline planq::GroundTask ferry_with(const std::string& problem) {
  return ground_text(slurp(domains_dir() / "ferry/domain.pddl"), problem);
}

inline std::vector<planq::ActionId> ids(const planq::GroundTask& t, const std::vector<std::string>& names) {
  std::vector<planq::ActionId> out;
  for (const auto& n : names) out.push_back(*t.find_action(n));
  return out;
}

}  // namespace testing_support

#include "planq/dataset.hpp"

namespace testing_support {

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("planq_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Writes the two ferry p01 worked examples (inapplicable, then applicable)
/// as an exemplar file and a one-record ferry p02 dataset to prompt for.
inline void write_worked_example_files(const std::filesystem::path& exemplars, const std::filesystem::path& dataset) {
  auto ex = load("ferry", "p01.pddl", false);
  const auto& t = *ex.task;
  planq::DatasetFile ef;
  for (const char* a : {"(sail l1 l0)", "(debark c1 l0)"}) {
    auto r = planq::make_applicability_bool(*ex.ctx, t.init, *t.find_action(a), 1);
    r.id = planq::record_id(r);
    ef.records.push_back(r);
  }
  planq::write_dataset(ef, exemplars);

  auto target = load("ferry", "p02.pddl", false);
  planq::DatasetFile df;
  auto r = planq::make_applicability_bool(*target.ctx, target.task->init, *target.task->find_action("(sail l1 l0)"), 2);
  r.id = planq::record_id(r);
  df.records.push_back(r);
  planq::write_dataset(df, dataset);
}

}  // namespace testing_support
