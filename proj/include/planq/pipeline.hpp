#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planq/evalharness.hpp"
#include "planq/oracle.hpp"
#include "planq/pddl.hpp"
#include "planq/render.hpp"
#include "planq/taskgen.hpp"

namespace planq {

/// Stable exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyMismatch = 1,
  kExitConfig = 2,
  kExitUnreachable = 3,
  kExitBadTranscript = 4,
};

struct LoadedProblem {
  std::string domain, file;
  std::unique_ptr<GroundTask> task;
  std::unique_ptr<Renderer> renderer;
  std::unique_ptr<OracleIndex> oracle;  // null when not requested
  std::unique_ptr<ProblemContext> context;
};

struct LoadedDomain {
  std::string name;
  std::vector<std::unique_ptr<LoadedProblem>> problems;  // sorted by file name
};

struct CatalogOptions {
  std::vector<std::string> domains;     // empty: every subdirectory
  std::string problems_glob = "*.pddl";
  bool build_oracle = true;
  std::size_t oracle_cap = 1'000'000;
  GenOptions gen;
};

/// Reads <dir>/<name>/{domain.pddl, templates.tpl, problems/*.pddl}.
/// Parse and template errors surface as ConfigError naming the file.
std::vector<LoadedDomain> load_catalog(const std::filesystem::path& dir, const CatalogOptions& opt);

struct GenerateConfig {
  std::filesystem::path domains_dir;
  CatalogOptions catalog;
  std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
  std::vector<QType> qtypes{QType::boolean, QType::mcq};
  std::size_t per_domain = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  /// Problem file reserved for in-context exemplars; empty disables.
  std::string exemplar_problem = "p01.pddl";
  SampleConfig sample;
  void validate() const;
  nlohmann::json echo() const;
};

/// Sidecar path for exemplars: data.jsonl -> data.exemplars.jsonl.
std::filesystem::path exemplar_path(const std::filesystem::path& dataset);

int cmd_generate(const GenerateConfig& cfg, std::ostream& out, std::ostream& err);

struct VerifyConfig {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> domains_dir;  // default: from the dataset header
  std::size_t cap = 1'000'000;
};

int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err);

struct EvaluateConfig {
  std::filesystem::path dataset;
  std::optional<std::filesystem::path> exemplars;  // default: sidecar if present
  EndpointConfig endpoint;
  std::string mock;  // "", "gold" or "random"
  PromptStyle style;
  std::size_t concurrency = 4;
  std::uint64_t seed = 0;
  bool dry_run = false;
  std::optional<std::size_t> limit;
  std::optional<std::filesystem::path> transcripts;  // default: <dataset stem>.transcripts.jsonl
  std::optional<std::filesystem::path> csv;
};

int cmd_evaluate(const EvaluateConfig& cfg, std::ostream& out, std::ostream& err);

struct ReportConfig {
  std::vector<std::filesystem::path> transcripts;
  std::string format = "text";  // text | csv
};

int cmd_report(const ReportConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses transcript lines; throws DatasetError with the line number.
std::vector<Transcript> read_transcripts(const std::filesystem::path& path);
void write_transcripts(const std::vector<Transcript>& transcripts, const std::filesystem::path& path);

}  // namespace planq
