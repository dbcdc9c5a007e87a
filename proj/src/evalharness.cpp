#include "planq/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "planq/error.hpp"
#include "planq/render.hpp"
#include "planq/rng.hpp"

namespace planq {

using nlohmann::json;

std::string_view mode_id(PromptMode m) { return m == PromptMode::io ? "io" : "cot"; }

std::optional<PromptMode> parse_mode(std::string_view id) {
  if (id == "io") return PromptMode::io;
  if (id == "cot") return PromptMode::cot;
  return std::nullopt;
}

ExemplarStore::ExemplarStore(std::vector<QuestionRecord> records) : records_(std::move(records)) {}

std::vector<const QuestionRecord*> ExemplarStore::pick(const QuestionRecord& r, std::size_t n) const {
  std::vector<const QuestionRecord*> out;
  for (const auto& e : records_) {
    if (out.size() == n) break;
    if (e.domain == r.domain && e.task == r.task && e.qtype == r.qtype && e.id != r.id) out.push_back(&e);
  }
  return out;
}

void ExemplarStore::check_disjoint(const std::vector<QuestionRecord>& evaluated) const {
  std::set<std::pair<std::string, std::string>> used;
  for (const auto& r : evaluated) used.insert({r.domain, r.problem_file});
  for (const auto& e : records_)
    if (used.contains({e.domain, e.problem_file}))
      throw ConfigError("exemplar " + e.id + " comes from " + e.domain + "/" + e.problem_file +
                        ", which is also in the evaluated set");
}

std::string question_block(const QuestionRecord& r) {
  std::string out = "**Question**: " + r.context + "  " + r.question;
  for (std::size_t i = 0; i < r.options.size(); ++i) out += "\n" + std::string(1, option_letter(i)) + ". " + r.options[i] + ".";
  return out;
}

std::string gold_answer_text(const QuestionRecord& r) {
  if (r.qtype == QType::boolean) return r.gold_yes ? "Yes" : "No";
  return std::string(1, option_letter(static_cast<std::size_t>(r.gold_index)));
}

namespace {
constexpr const char* kThoughts = "**Thoughts**: Let's think step by step.";
}

std::string build_prompt(const QuestionRecord& r, const PromptStyle& style, const ExemplarStore& exemplars) {
  if (style.shots != 0 && style.shots != 2) throw ConfigError("shots must be 0 or 2");
  std::string out;
  if (style.shots > 0) {
    const auto shots = exemplars.pick(r, static_cast<std::size_t>(style.shots));
    if (shots.size() < static_cast<std::size_t>(style.shots))
      throw ConfigError("need " + std::to_string(style.shots) + " exemplars for " + r.domain + "/" +
                        std::string(task_id(r.task)) + "/" + std::string(qtype_id(r.qtype)) + ", found " +
                        std::to_string(shots.size()));
    for (const auto* e : shots) {
      out += question_block(*e) + "\n";
      if (style.mode == PromptMode::cot) out += std::string(kThoughts) + "\n" + e->rationale + "\n";
      out += "**Final Answer**: " + gold_answer_text(*e) + ".\n";
    }
  }
  out += question_block(r) + "\n";
  out += style.mode == PromptMode::cot ? kThoughts : "**Final Answer**:";
  return out;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string answer_segment(const std::string& completion) {
  const std::string low = lower(completion);
  const auto at = low.rfind("final answer");
  if (at == std::string::npos) return completion;
  return completion.substr(at + std::string_view("final answer").size());
}

}  // namespace

Extracted extract_answer(const std::string& completion, QType qtype, const std::vector<std::string>& options) {
  const std::string seg = answer_segment(completion);
  if (qtype == QType::boolean) {
    std::size_t i = 0;
    while (i < seg.size()) {
      if (!alnum(seg[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < seg.size() && alnum(seg[j])) ++j;
      const auto word = lower(std::string_view(seg).substr(i, j - i));
      if (word == "yes") return {Extracted::Kind::yes, -1};
      if (word == "no") return {Extracted::Kind::no, -1};
      i = j;
    }
    return {};
  }
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const char c = seg[i];
    if (c < 'A' || c > 'D') continue;
    if (i > 0 && alnum(seg[i - 1])) continue;
    if (i + 1 < seg.size() && (alnum(seg[i + 1]) || seg[i + 1] == '\'')) continue;
    // The article "A" in running text is not an answer.
    if (c == 'A' && i + 2 < seg.size() && seg[i + 1] == ' ' && std::islower(static_cast<unsigned char>(seg[i + 2]))) {
      const auto next = seg.substr(i + 2, 4);
      if (next.rfind("and ", 0) != 0 && next.rfind("or ", 0) != 0) continue;
    }
    return {Extracted::Kind::option, c - 'A'};
  }
  const std::string norm = normalize_text(seg);
  int found = -1;
  for (std::size_t k = 0; k < options.size(); ++k) {
    const std::string opt = normalize_text(options[k]);
    if (opt.empty() || norm.find(opt) == std::string::npos) continue;
    if (found >= 0) return {};
    found = static_cast<int>(k);
  }
  if (found >= 0) return {Extracted::Kind::option, found};
  return {};
}

std::string extracted_id(const Extracted& e) {
  switch (e.kind) {
    case Extracted::Kind::yes: return "yes";
    case Extracted::Kind::no: return "no";
    case Extracted::Kind::option: return std::string(1, option_letter(static_cast<std::size_t>(e.option)));
    case Extracted::Kind::failure: return "failure";
  }
  return "failure";
}

bool is_correct(const QuestionRecord& r, const Extracted& e) {
  if (r.qtype == QType::boolean)
    return (e.kind == Extracted::Kind::yes && r.gold_yes) || (e.kind == Extracted::Kind::no && !r.gold_yes);
  return e.kind == Extracted::Kind::option && e.option == r.gold_index;
}

void EndpointConfig::validate() const {
  if (url.empty()) throw ConfigError("endpoint URL is empty");
  if (url.rfind("http://", 0) != 0 && url.rfind("https://", 0) != 0)
    throw ConfigError("endpoint URL must start with http:// or https://");
  if (api != "completions" && api != "chat") throw ConfigError("api must be 'completions' or 'chat'");
  if (max_new_tokens < 1) throw ConfigError("max_new_tokens must be at least 1");
  if (retries < 0 || retries > 10) throw ConfigError("retries must be between 0 and 10");
  if (timeout_seconds < 1) throw ConfigError("timeout must be at least one second");
}

std::string GoldMock::complete(const std::string&, const QuestionRecord& record) {
  return "The answer follows from the description.\n**Final Answer**: " + gold_answer_text(record) + ".";
}

std::string RandomMock::complete(const std::string&, const QuestionRecord& record) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : record.id) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  Rng rng(child_seed(seed_, {h}));
  const std::string answer =
      record.qtype == QType::boolean ? (rng.coin() ? "Yes" : "No") : std::string(1, option_letter(rng.below(4)));
  return "**Final Answer**: " + answer + ".";
}

json transcript_to_json(const Transcript& t) {
  return json{{"id", t.id},           {"domain", t.domain},       {"problem", t.problem},
              {"task", t.task},       {"qtype", t.qtype},         {"model", t.model},
              {"style", t.style},     {"shots", t.shots},         {"prompt", t.prompt},
              {"completion", t.completion}, {"options", t.options}, {"gold", t.gold},
              {"extracted", t.extracted},   {"correct", t.correct}, {"errored", t.errored},
              {"error", t.error}};
}

Transcript transcript_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("transcript line is not an object");
  Transcript t;
  try {
    t.id = j.at("id").get<std::string>();
    t.domain = j.at("domain").get<std::string>();
    t.problem = j.value("problem", "");
    t.task = j.at("task").get<std::string>();
    t.qtype = j.at("qtype").get<std::string>();
    t.model = j.value("model", "");
    t.style = j.value("style", "");
    t.shots = j.value("shots", 0);
    t.prompt = j.value("prompt", "");
    t.completion = j.at("completion").get<std::string>();
    t.options = j.value("options", std::vector<std::string>{});
    t.gold = j.at("gold").get<std::string>();
    t.extracted = j.value("extracted", "");
    t.correct = j.value("correct", false);
    t.errored = j.value("errored", false);
    t.error = j.value("error", "");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad transcript: ") + e.what());
  }
  const auto qtype = parse_qtype(t.qtype);
  if (!parse_task(t.task) || !qtype) throw std::invalid_argument("unknown task or qtype in transcript");
  if (*qtype == QType::boolean ? (t.gold != "yes" && t.gold != "no")
                               : (t.gold.size() != 1 || t.gold[0] < 'A' || t.gold[0] > 'D'))
    throw std::invalid_argument("bad gold answer '" + t.gold + "'");
  return t;
}

EvalReport score(const std::vector<Transcript>& transcripts) {
  EvalReport rep;
  for (const auto& t : transcripts) {
    ++rep.total;
    auto& cell = rep.cells[{t.task, t.qtype, t.domain}];
    auto& task = rep.tasks[{t.task, t.qtype}];
    if (t.errored) {
      ++rep.errored;
      ++cell.errored;
      ++task.errored;
      continue;
    }
    // Re-extract so that scoring depends on the completion alone.
    const auto e = extract_answer(t.completion, *parse_qtype(t.qtype), t.options);
    const bool ok = extracted_id(e) == t.gold;
    for (auto* c : {&cell, &task}) {
      ++c->scored;
      if (ok) ++c->correct;
      if (e.kind == Extracted::Kind::failure) ++c->failures;
    }
    if (e.kind == Extracted::Kind::failure) ++rep.failures;
  }
  for (const char* q : {"bool", "mcq"}) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& [key, c] : rep.tasks)
      if (key.second == q && c.scored > 0) {
        sum += c.accuracy();
        ++n;
      }
    if (n > 0) rep.mean[q] = sum / static_cast<double>(n);
  }
  return rep;
}

std::vector<Transcript> evaluate(const std::vector<QuestionRecord>& records, CompletionClient& client,
                                 const ExemplarStore& exemplars, const EvalOptions& opt) {
  std::vector<Transcript> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto& t = out[i];
    t.id = r.id;
    t.domain = r.domain;
    t.problem = r.problem_file;
    t.task = task_id(r.task);
    t.qtype = qtype_id(r.qtype);
    t.model = opt.model;
    t.style = mode_id(opt.style.mode);
    t.shots = opt.style.shots;
    t.prompt = build_prompt(r, opt.style, exemplars);
    t.options = r.options;
    t.gold = r.qtype == QType::boolean ? (r.gold_yes ? "yes" : "no") : gold_answer_text(r);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> answered{false}, abort{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size() && !abort; i = next++) {
      auto& t = out[i];
      bool unreachable = false;
      for (int attempt = 0; attempt <= opt.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(opt.backoff_ms << (attempt - 1)));
        try {
          t.completion = client.complete(t.prompt, records[i]);
          t.errored = false;
          t.error.clear();
          answered = true;
          break;
        } catch (const EndpointUnreachable& e) {
          t.errored = true;
          t.error = e.what();
          unreachable = true;
        } catch (const TransientError& e) {
          t.errored = true;
          t.error = e.what();
          unreachable = false;
        } catch (const std::exception& e) {
          t.errored = true;
          t.error = e.what();
          unreachable = false;
          break;
        }
      }
      if (t.errored && unreachable && !answered) abort = true;
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(opt.concurrency, records.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (abort && !answered) {
    for (const auto& t : out)
      if (t.errored) throw EndpointUnreachable(t.error);
    throw EndpointUnreachable("endpoint unreachable");
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& t = out[i];
    if (t.errored) {
      t.extracted = "failure";
      continue;
    }
    const auto e = extract_answer(t.completion, records[i].qtype, records[i].options);
    t.extracted = extracted_id(e);
    t.correct = is_correct(records[i], e);
  }
  return out;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

}  // namespace

std::string report_table(const EvalReport& report) {
  if (report.total == 0) return "(no transcripts)\n";
  std::string out = pad("Task", 10) + pad("Bool", 10) + "MCQ\n";
  for (auto t : kAllTasks) {
    const std::string id(task_id(t));
    std::string row = pad(id, 10);
    bool any = false;
    for (const char* q : {"bool", "mcq"}) {
      auto it = report.tasks.find({id, q});
      const bool has = it != report.tasks.end() && it->second.scored > 0;
      any = any || it != report.tasks.end();
      row += pad(has ? fixed2(it->second.accuracy()) : "-", 10);
    }
    if (any) out += row.substr(0, row.find_last_not_of(' ') + 1) + "\n";
  }
  std::string mean = pad("Mean", 10);
  for (const char* q : {"bool", "mcq"}) {
    auto it = report.mean.find(q);
    mean += pad(it != report.mean.end() ? fixed2(it->second) : "-", 10);
  }
  out += mean.substr(0, mean.find_last_not_of(' ') + 1) + "\n\n";
  out += "Scored " + std::to_string(report.total - report.errored) + " of " + std::to_string(report.total) +
         " (errored " + std::to_string(report.errored) + "); extraction failures " + fixed2(report.failure_rate()) +
         "%\n";

  std::set<std::string> domains;
  for (const auto& [key, c] : report.cells) domains.insert(std::get<2>(key));
  std::string head = pad("Domain", 14);
  std::vector<std::string> cols;
  for (auto t : kAllTasks) {
    const std::string id(task_id(t));
    if (report.tasks.contains({id, "bool"}) || report.tasks.contains({id, "mcq"})) cols.push_back(id);
  }
  for (const auto& c : cols) head += pad(c, 15);
  out += "\nPer domain (Bool/MCQ)\n" + head.substr(0, head.find_last_not_of(' ') + 1) + "\n";
  for (const auto& d : domains) {
    std::string row = pad(d, 14);
    for (const auto& c : cols) {
      std::string cell;
      for (const char* q : {"bool", "mcq"}) {
        auto it = report.cells.find({c, q, d});
        if (!cell.empty()) cell += "/";
        cell += it != report.cells.end() && it->second.scored > 0 ? fixed2(it->second.accuracy()) : "-";
      }
      row += pad(cell, 15);
    }
    out += row.substr(0, row.find_last_not_of(' ') + 1) + "\n";
  }
  return out;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "scope,task,qtype,domain,correct,scored,failures,errored,accuracy\n";
  auto line = [&](const std::string& scope, const std::string& task, const std::string& qtype,
                  const std::string& domain, const CellScore& c) {
    out += scope + "," + task + "," + qtype + "," + domain + "," + std::to_string(c.correct) + "," +
           std::to_string(c.scored) + "," + std::to_string(c.failures) + "," + std::to_string(c.errored) + "," +
           fixed2(c.accuracy()) + "\n";
  };
  for (const auto& [key, c] : report.cells) line("cell", std::get<0>(key), std::get<1>(key), std::get<2>(key), c);
  for (const auto& [key, c] : report.tasks) line("task", key.first, key.second, "", c);
  for (const auto& [q, m] : report.mean) out += "mean,," + q + ",,,,,," + fixed2(m) + "\n";
  return out;
}

}  // namespace planq
