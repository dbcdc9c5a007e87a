#include "planq/pipeline.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "planq/audit.hpp"
#include "planq/dataset.hpp"
#include "planq/error.hpp"
#include "planq/rng.hpp"

namespace planq {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<LoadedDomain> load_catalog(const fs::path& dir, const CatalogOptions& opt) {
  if (!fs::is_directory(dir)) throw ConfigError("domain directory " + dir.string() + " does not exist");
  std::vector<std::string> names = opt.domains;
  if (names.empty()) {
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_directory()) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
  }
  std::vector<LoadedDomain> out;
  for (const auto& name : names) {
    const fs::path base = dir / name;
    if (!fs::exists(base / "domain.pddl")) throw ConfigError("no domain.pddl in " + base.string());
    if (!fs::exists(base / "templates.tpl")) throw ConfigError("no templates.tpl in " + base.string());
    pddl::LiftedDomain lifted;
    try {
      lifted = pddl::load_domain((base / "domain.pddl").string());
    } catch (const std::exception& e) {
      throw ConfigError((base / "domain.pddl").string() + ": " + e.what());
    }
    const auto templates = TemplateSet::load(base / "templates.tpl");
    std::vector<fs::path> files;
    if (fs::is_directory(base / "problems"))
      for (const auto& e : fs::directory_iterator(base / "problems"))
        if (e.is_regular_file() && fnmatch(opt.problems_glob.c_str(), e.path().filename().c_str(), 0) == 0)
          files.push_back(e.path());
    std::sort(files.begin(), files.end());
    LoadedDomain dom{name, {}};
    for (const auto& f : files) {
      auto lp = std::make_unique<LoadedProblem>();
      lp->domain = name;
      lp->file = f.filename().string();
      try {
        const auto problem = pddl::load_problem(f.string(), lifted);
        lp->task = std::make_unique<GroundTask>(ground_task(lifted, problem));
      } catch (const std::exception& e) {
        throw ConfigError(f.string() + ": " + e.what());
      }
      try {
        lp->renderer = std::make_unique<Renderer>(*lp->task, templates);
      } catch (const ConfigError& e) {
        throw ConfigError((base / "templates.tpl").string() + " (" + lp->file + "): " + e.what());
      }
      const OracleIndex* oracle = nullptr;
      if (opt.build_oracle) {
        lp->oracle = std::make_unique<OracleIndex>(OracleIndex::build(*lp->task, lp->task->init, opt.oracle_cap));
        if (!lp->oracle->truncated()) oracle = lp->oracle.get();
      }
      lp->context = std::make_unique<ProblemContext>(name, lp->file, *lp->task, *lp->renderer, oracle, opt.gen);
      dom.problems.push_back(std::move(lp));
    }
    out.push_back(std::move(dom));
  }
  return out;
}

void GenerateConfig::validate() const {
  if (domains_dir.empty()) throw ConfigError("--domains is required");
  if (out.empty()) throw ConfigError("--out is required");
  if (tasks.empty()) throw ConfigError("no tasks selected");
  if (qtypes.empty()) throw ConfigError("no question types selected");
  if (per_domain == 0) throw ConfigError("--per-domain must be positive");
  if (catalog.oracle_cap == 0) throw ConfigError("oracle cap must be positive");
}

json GenerateConfig::echo() const {
  json tasks_j = json::array(), qtypes_j = json::array();
  for (auto t : tasks) tasks_j.push_back(task_id(t));
  for (auto q : qtypes) qtypes_j.push_back(qtype_id(q));
  return json{{"domains", domains_dir.generic_string()},
              {"domain_filter", catalog.domains},
              {"problems", catalog.problems_glob},
              {"tasks", tasks_j},
              {"qtypes", qtypes_j},
              {"per_domain", per_domain},
              {"seed", seed},
              {"exemplar_problem", exemplar_problem},
              {"oracle_cap", catalog.oracle_cap},
              {"prog_pairs", catalog.gen.prog_pairs},
              {"num_plans", catalog.gen.num_plans},
              {"plan_slack", catalog.gen.plan_slack},
              {"state_cap", sample.state_cap},
              {"rollout_depth", sample.rollout_depth},
              {"rollouts_per_state", sample.rollouts_per_state}};
}

fs::path exemplar_path(const fs::path& dataset) {
  return dataset.parent_path() / (dataset.stem().string() + ".exemplars" + dataset.extension().string());
}

namespace {

void order_exemplars(std::vector<QuestionRecord>& records) {
  // Within each (domain, task, qtype) run: the "no" example first, as in
  // the worked example prompt.
  auto same = [](const QuestionRecord& a, const QuestionRecord& b) {
    return a.domain == b.domain && a.task == b.task && a.qtype == b.qtype;
  };
  for (auto first = records.begin(); first != records.end();) {
    auto last = std::find_if_not(first, records.end(), [&](const QuestionRecord& r) { return same(r, *first); });
    std::stable_partition(first, last, [](const QuestionRecord& r) { return r.qtype == QType::boolean && !r.gold_yes; });
    first = last;
  }
}

}  // namespace

int cmd_generate(const GenerateConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const auto catalog = load_catalog(cfg.domains_dir, cfg.catalog);
    std::vector<DomainProblems> main, shots;
    for (const auto& dom : catalog) {
      DomainProblems m{dom.name, {}}, s{dom.name, {}};
      for (const auto& p : dom.problems) (p->file == cfg.exemplar_problem ? s : m).problems.push_back(p->context.get());
      main.push_back(std::move(m));
      if (!s.problems.empty()) shots.push_back(std::move(s));
    }
    GenBatch batch;
    batch.tasks = cfg.tasks;
    batch.qtypes = cfg.qtypes;
    batch.per_domain = cfg.per_domain;
    batch.seed = cfg.seed;
    batch.sample = cfg.sample;
    batch.gen = cfg.catalog.gen;
    const auto result = assemble_batch(main, batch);

    DatasetFile file;
    file.header.seed = cfg.seed;
    file.header.config = cfg.echo();
    file.records = result.records;
    write_dataset(file, cfg.out);

    std::size_t exemplar_count = 0;
    if (!cfg.exemplar_problem.empty()) {
      GenBatch eb = batch;
      eb.per_domain = 2;
      eb.seed = child_seed(cfg.seed, {0xe8e});
      auto ex = assemble_batch(shots, eb);
      order_exemplars(ex.records);
      DatasetFile sidecar;
      sidecar.header.seed = cfg.seed;
      sidecar.header.config = cfg.echo();
      sidecar.header.config["role"] = "exemplars";
      sidecar.records = std::move(ex.records);
      exemplar_count = sidecar.records.size();
      write_dataset(sidecar, exemplar_path(cfg.out));
    }

    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> counts;
    for (const auto& r : result.records)
      ++counts[{r.domain, std::string(task_id(r.task)), std::string(qtype_id(r.qtype))}];
    out << "wrote " << result.records.size() << " records to " << cfg.out.string() << "\n";
    if (!cfg.exemplar_problem.empty())
      out << "wrote " << exemplar_count << " exemplars to " << exemplar_path(cfg.out).string() << "\n";
    for (const auto& [key, n] : counts)
      out << "  " << std::get<0>(key) << " " << std::get<1>(key) << " " << std::get<2>(key) << ": " << n << "\n";
    for (const auto& u : result.under_fills)
      out << "  under-fill " << u.domain << " " << task_id(u.task) << " " << qtype_id(u.qtype) << ": " << u.got << " of "
          << u.wanted << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err) {
  DatasetFile file;
  std::vector<LoadedDomain> catalog;
  try {
    file = read_dataset(cfg.dataset);
    fs::path dir;
    if (cfg.domains_dir)
      dir = *cfg.domains_dir;
    else if (file.header.config.contains("domains"))
      dir = file.header.config["domains"].get<std::string>();
    else
      throw ConfigError("dataset header does not name a domain directory; pass --domains");
    std::set<std::string> names;
    for (const auto& r : file.records) names.insert(r.domain);
    CatalogOptions opt;
    opt.domains.assign(names.begin(), names.end());
    opt.oracle_cap = cfg.cap;
    if (file.header.config.contains("problems")) opt.problems_glob = file.header.config["problems"].get<std::string>();
    catalog = load_catalog(dir, opt);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::map<std::pair<std::string, std::string>, const LoadedProblem*> index;
  for (const auto& d : catalog)
    for (const auto& p : d.problems) index[{p->domain, p->file}] = p.get();

  VerifyReport report;
  for (const auto& r : file.records) {
    auto it = index.find({r.domain, r.problem_file});
    if (it == index.end()) {
      report.add(r, {VerifyStatus::mismatch, "problem file not found"});
      continue;
    }
    const auto& p = *it->second;
    report.add(r, verify_record(r, *p.task, *p.renderer, *p.oracle));
  }
  out << "task    qtype  confirmed  mismatched  unverifiable\n";
  for (const auto& [key, t] : report.by_task) {
    char line[96];
    std::snprintf(line, sizeof line, "%-7s %-6s %9zu  %10zu  %12zu\n", key.first.c_str(), key.second.c_str(), t.confirmed,
                  t.mismatched, t.unverifiable);
    out << line;
  }
  out << "total: " << report.total.confirmed << " confirmed, " << report.total.mismatched << " mismatched, "
      << report.total.unverifiable << " unverifiable\n";
  for (const auto& [id, note] : report.unverifiable) out << "unverifiable " << id << ": " << note << "\n";
  for (const auto& [id, note] : report.mismatches) out << "MISMATCH " << id << ": " << note << "\n";
  return report.total.mismatched ? kExitVerifyMismatch : kExitOk;
}

void write_transcripts(const std::vector<Transcript>& transcripts, const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  for (const auto& t : transcripts) f << transcript_to_json(t).dump() << "\n";
}

std::vector<Transcript> read_transcripts(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::vector<Transcript> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(transcript_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw DatasetError(path.string(), lineno, e.what());
    }
  }
  return out;
}

int cmd_evaluate(const EvaluateConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<QuestionRecord> records;
  ExemplarStore exemplars;
  std::unique_ptr<CompletionClient> client;
  try {
    records = read_dataset(cfg.dataset).records;
    if (cfg.limit && *cfg.limit < records.size()) records.resize(*cfg.limit);
    const fs::path ex = cfg.exemplars ? *cfg.exemplars : exemplar_path(cfg.dataset);
    if (cfg.style.shots > 0) {
      if (!fs::exists(ex)) throw ConfigError("2-shot prompts need exemplars; " + ex.string() + " not found");
      exemplars = ExemplarStore(read_dataset(ex).records);
      exemplars.check_disjoint(records);
    }
    if (cfg.dry_run) {
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (i > 0) out << "-----\n";
        out << build_prompt(records[i], cfg.style, exemplars) << "\n";
      }
      return kExitOk;
    }
    if (cfg.mock == "gold")
      client = std::make_unique<GoldMock>();
    else if (cfg.mock == "random")
      client = std::make_unique<RandomMock>(cfg.seed);
    else if (cfg.mock.empty())
      client = make_http_client(cfg.endpoint);
    else
      throw ConfigError("unknown mock '" + cfg.mock + "'");
    for (const auto& r : records) build_prompt(r, cfg.style, exemplars);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  EvalOptions opt;
  opt.style = cfg.style;
  opt.model = cfg.mock.empty() ? cfg.endpoint.model : "mock-" + cfg.mock;
  opt.concurrency = cfg.concurrency;
  opt.retries = cfg.endpoint.retries;
  std::vector<Transcript> transcripts;
  try {
    transcripts = evaluate(records, *client, exemplars, opt);
  } catch (const EndpointUnreachable& e) {
    err << "error: endpoint unreachable: " << e.what() << "\n";
    return kExitUnreachable;
  }
  const fs::path tpath = cfg.transcripts
                             ? *cfg.transcripts
                             : cfg.dataset.parent_path() / (cfg.dataset.stem().string() + ".transcripts.jsonl");
  try {
    write_transcripts(transcripts, tpath);
    const auto report = score(transcripts);
    out << report_table(report);
    if (cfg.csv) {
      std::ofstream f(*cfg.csv, std::ios::binary | std::ios::trunc);
      if (!f) throw ConfigError("cannot write " + cfg.csv->string());
      f << report_csv(report);
    }
    out << "transcripts: " << tpath.string() << "\n";
    if (report.errored) err << "warning: " << report.errored << " records errored and were not scored\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_report(const ReportConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "text" && cfg.format != "csv") {
    err << "error: --format must be text or csv\n";
    return kExitConfig;
  }
  std::vector<Transcript> all;
  for (const auto& p : cfg.transcripts) {
    try {
      auto part = read_transcripts(p);
      all.insert(all.end(), part.begin(), part.end());
    } catch (const DatasetError& e) {
      err << "error: malformed transcript at " << e.what() << "\n";
      return kExitBadTranscript;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  if (all.empty()) err << "warning: no transcripts; the report is empty\n";
  const auto report = score(all);
  out << (cfg.format == "csv" ? report_csv(report) : report_table(report));
  return kExitOk;
}

}  // namespace planq
