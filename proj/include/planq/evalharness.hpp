#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planq/taskgen.hpp"
#include "json.hpp"

namespace planq {

enum class PromptMode { io, cot };

struct PromptStyle {
  PromptMode mode = PromptMode::cot;
  int shots = 2;  // 0 or 2
};

std::string_view mode_id(PromptMode m);
std::optional<PromptMode> parse_mode(std::string_view id);

/// In-context examples keyed by (domain, task, qtype), in file order.
class ExemplarStore {
 public:
  ExemplarStore() = default;
  explicit ExemplarStore(std::vector<QuestionRecord> records);
  /// The first `n` exemplars for the record's domain, task and qtype.
  std::vector<const QuestionRecord*> pick(const QuestionRecord& r, std::size_t n) const;
  /// Throws ConfigError if an exemplar comes from a (domain, problem) that
  /// also appears among the evaluated records.
  void check_disjoint(const std::vector<QuestionRecord>& evaluated) const;
  bool empty() const { return records_.empty(); }

 private:
  std::vector<QuestionRecord> records_;
};

/// "**Question**: context  question", options as "A. text." lines.
std::string question_block(const QuestionRecord& r);
std::string gold_answer_text(const QuestionRecord& r);  // "Yes" / "No" / "B"
/// Throws ConfigError when shots=2 and fewer than two exemplars exist.
std::string build_prompt(const QuestionRecord& r, const PromptStyle& style, const ExemplarStore& exemplars);

struct Extracted {
  enum class Kind { yes, no, option, failure };
  Kind kind = Kind::failure;
  int option = -1;
  bool operator==(const Extracted&) const = default;
};

/// Looks after the last "Final Answer" marker, or the whole text without
/// one. Bool: first yes/no word. Mcq: first standalone letter A-D, else a
/// unique option text contained in the answer.
Extracted extract_answer(const std::string& completion, QType qtype, const std::vector<std::string>& options = {});
std::string extracted_id(const Extracted& e);  // "yes", "no", "A".."D", "failure"
bool is_correct(const QuestionRecord& r, const Extracted& e);

// ---------------------------------------------------------------- clients

/// Connection-level failure: nothing answered.
class EndpointUnreachable : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Worth retrying (timeouts, 429, 5xx).
class TransientError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  /// Mocks may look at the record; real endpoints only see the prompt.
  virtual std::string complete(const std::string& prompt, const QuestionRecord& record) = 0;
};

struct EndpointConfig {
  std::string url;                       // http(s)://host[:port]/path
  std::string api = "completions";       // completions | chat
  std::string token_env = "PLANQ_API_TOKEN";
  std::string model;
  int max_new_tokens = 1024;
  double temperature = 0.0;
  int timeout_seconds = 120;
  int retries = 3;
  void validate() const;
};

std::unique_ptr<CompletionClient> make_http_client(const EndpointConfig& cfg);

/// Always answers correctly, in the prompt answer format.
class GoldMock : public CompletionClient {
 public:
  std::string complete(const std::string& prompt, const QuestionRecord& record) override;
};

/// Uniform random answers, deterministic per (seed, record id).
class RandomMock : public CompletionClient {
 public:
  explicit RandomMock(std::uint64_t seed) : seed_(seed) {}
  std::string complete(const std::string& prompt, const QuestionRecord& record) override;

 private:
  std::uint64_t seed_;
};

// ---------------------------------------------------------------- evaluation

struct Transcript {
  std::string id, domain, problem, task, qtype;
  std::string model, style;
  int shots = 0;
  std::string prompt, completion;
  std::vector<std::string> options;
  std::string gold;       // "yes" / "no" / letter
  std::string extracted;  // as extracted_id
  bool correct = false;
  bool errored = false;
  std::string error;
};

nlohmann::json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);  // throws std::invalid_argument

struct CellScore {
  std::size_t correct = 0, scored = 0, failures = 0, errored = 0;
  double accuracy() const { return scored ? 100.0 * static_cast<double>(correct) / static_cast<double>(scored) : 0.0; }
};

struct EvalReport {
  std::map<std::tuple<std::string, std::string, std::string>, CellScore> cells;  // (task, qtype, domain)
  std::map<std::pair<std::string, std::string>, CellScore> tasks;               // (task, qtype), pooled
  std::map<std::string, double> mean;  // qtype -> unweighted mean of task accuracies
  std::size_t total = 0, errored = 0, failures = 0;
  double failure_rate() const {
    const auto scored = total - errored;
    return scored ? 100.0 * static_cast<double>(failures) / static_cast<double>(scored) : 0.0;
  }
};

EvalReport score(const std::vector<Transcript>& transcripts);

struct EvalOptions {
  PromptStyle style;
  std::string model;
  std::size_t concurrency = 4;
  int retries = 3;
  int backoff_ms = 200;
};

/// Queries every record once. Records whose attempts all fail are marked
/// errored; if nothing at all was answered and the endpoint never
/// connected, EndpointUnreachable propagates.
std::vector<Transcript> evaluate(const std::vector<QuestionRecord>& records, CompletionClient& client,
                                 const ExemplarStore& exemplars, const EvalOptions& opt);

/// Task rows x (Bool, MCQ) columns, a Mean row, then a per-domain table.
std::string report_table(const EvalReport& report);
/// scope,task,qtype,domain,correct,scored,failures,errored,accuracy
std::string report_csv(const EvalReport& report);

}  // namespace planq
