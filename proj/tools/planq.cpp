#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "planq/pipeline.hpp"

using namespace planq;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, verify and evaluate planning-reasoning question sets"};
  app.require_subcommand(1);

  GenerateConfig gen;
  std::string domains_dir = std::string(PLANQ_DATA_DIR) + "/domains", out_path, tasks = "all", domain_filter;
  bool only_mcq = false, only_bool = false, both = false;
  auto* g = app.add_subcommand("generate", "Generate a dataset from PDDL domains and templates");
  g->add_option("--domains", domains_dir, "Directory of <domain>/{domain.pddl,templates.tpl,problems/}")
      ->capture_default_str();
  g->add_option("--only", domain_filter, "Comma-separated domain names (default: all)");
  g->add_option("--problems", gen.catalog.problems_glob, "Problem file glob")->capture_default_str();
  g->add_option("--tasks", tasks, "Comma-separated: app,prog,reach,areach,val,just,land or all")->capture_default_str();
  g->add_option("--per-domain", gen.per_domain, "Questions per (domain, task, qtype)")->capture_default_str();
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--out", out_path, "Output dataset (JSON Lines)")->required();
  g->add_flag("--mcq", only_mcq, "Only multiple-choice questions");
  g->add_flag("--bool", only_bool, "Only boolean questions");
  g->add_flag("--both", both, "Both question types (default)");
  g->add_option("--exemplar-problem", gen.exemplar_problem, "Problem reserved for exemplars, '' to disable")
      ->capture_default_str();
  g->add_option("--cap", gen.catalog.oracle_cap, "State cap for the explicit state space")->capture_default_str();
  g->add_option("--state-cap", gen.sample.state_cap, "Sampled states per problem")->capture_default_str();
  g->add_flag("--prog-pairs", gen.catalog.gen.prog_pairs, "Progression mcq options as fact pairs");

  VerifyConfig ver;
  std::string ver_dataset, ver_domains;
  auto* v = app.add_subcommand("verify", "Re-check every gold answer against the explicit state space");
  v->add_option("--dataset", ver_dataset, "Dataset file")->required();
  v->add_option("--domains", ver_domains, "Domain directory (default: from the dataset header)");
  v->add_option("--cap", ver.cap, "State cap; records beyond it are reported unverifiable")->capture_default_str();

  EvaluateConfig ev;
  std::string ev_dataset, ev_exemplars, ev_style = "cot", ev_transcripts, ev_csv;
  std::size_t ev_limit = 0;
  auto* e = app.add_subcommand("evaluate", "Query a completion endpoint and score the answers");
  e->add_option("--dataset", ev_dataset, "Dataset file")->required();
  e->add_option("--exemplars", ev_exemplars, "Exemplar file (default: <dataset>.exemplars.jsonl)");
  e->add_option("--endpoint", ev.endpoint.url, "Completion endpoint URL");
  e->add_option("--api", ev.endpoint.api, "completions or chat")->capture_default_str();
  e->add_option("--model", ev.endpoint.model, "Model name sent to the endpoint");
  e->add_option("--token-env", ev.endpoint.token_env, "Environment variable holding the bearer token")
      ->capture_default_str();
  e->add_option("--max-new-tokens", ev.endpoint.max_new_tokens)->capture_default_str();
  e->add_option("--temperature", ev.endpoint.temperature)->capture_default_str();
  e->add_option("--timeout", ev.endpoint.timeout_seconds, "Seconds per request")->capture_default_str();
  e->add_option("--retries", ev.endpoint.retries)->capture_default_str();
  e->add_option("--style", ev_style, "io or cot")->capture_default_str();
  e->add_option("--shots", ev.style.shots, "0 or 2")->capture_default_str();
  e->add_option("--concurrency", ev.concurrency)->capture_default_str();
  e->add_option("--seed", ev.seed, "Seed for the random mock")->capture_default_str();
  e->add_option("--mock", ev.mock, "Use a built-in model instead of an endpoint: gold or random");
  e->add_flag("--dry-run", ev.dry_run, "Print prompts without sending them");
  e->add_option("--limit", ev_limit, "Only the first N records");
  e->add_option("--transcripts", ev_transcripts, "Transcript output (default: <dataset>.transcripts.jsonl)");
  e->add_option("--csv", ev_csv, "Also write the report as CSV");

  ReportConfig rep;
  auto* r = app.add_subcommand("report", "Re-score stored transcripts");
  r->add_option("--transcripts", rep.transcripts, "Transcript files")->required();
  r->add_option("--format", rep.format, "text or csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (g->parsed()) {
    gen.domains_dir = domains_dir;
    gen.out = out_path;
    if (!domain_filter.empty()) gen.catalog.domains = split_list(domain_filter);
    if (tasks != "all") {
      gen.tasks.clear();
      for (const auto& id : split_list(tasks)) {
        auto t = parse_task(id);
        if (!t) {
          std::cerr << "error: unknown task '" << id << "'\n";
          return kExitConfig;
        }
        gen.tasks.push_back(*t);
      }
    }
    if (only_mcq + only_bool + both > 1) {
      std::cerr << "error: pick one of --mcq, --bool, --both\n";
      return kExitConfig;
    }
    if (only_mcq) gen.qtypes = {QType::mcq};
    if (only_bool) gen.qtypes = {QType::boolean};
    return cmd_generate(gen, std::cout, std::cerr);
  }
  if (v->parsed()) {
    ver.dataset = ver_dataset;
    if (!ver_domains.empty()) ver.domains_dir = ver_domains;
    return cmd_verify(ver, std::cout, std::cerr);
  }
  if (e->parsed()) {
    ev.dataset = ev_dataset;
    if (!ev_exemplars.empty()) ev.exemplars = ev_exemplars;
    auto mode = parse_mode(ev_style);
    if (!mode) {
      std::cerr << "error: --style must be io or cot\n";
      return kExitConfig;
    }
    ev.style.mode = *mode;
    if (ev_limit) ev.limit = ev_limit;
    if (!ev_transcripts.empty()) ev.transcripts = ev_transcripts;
    if (!ev_csv.empty()) ev.csv = ev_csv;
    if (ev.mock.empty() && !ev.dry_run && ev.endpoint.url.empty()) {
      std::cerr << "error: --endpoint or --mock is required\n";
      return kExitConfig;
    }
    return cmd_evaluate(ev, std::cout, std::cerr);
  }
  return cmd_report(rep, std::cout, std::cerr);
}
