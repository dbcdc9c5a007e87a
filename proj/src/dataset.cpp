#include "planq/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "planq/error.hpp"

namespace planq {

using nlohmann::json;

DatasetError::DatasetError(const std::string& where, std::size_t line, const std::string& what)
    : std::runtime_error(line ? where + ":" + std::to_string(line) + ": " + what : where + ": " + what), line_(line) {}

json record_to_json(const QuestionRecord& r) {
  json j;
  j["id"] = r.id;
  j["domain"] = r.domain;
  j["problem"] = r.problem_file;
  j["task"] = task_id(r.task);
  j["qtype"] = qtype_id(r.qtype);
  j["context"] = r.context;
  j["question"] = r.question;
  j["options"] = r.options;
  if (r.qtype == QType::boolean)
    j["answer"] = r.gold_yes ? "yes" : "no";
  else
    j["answer"] = std::string(1, option_letter(static_cast<std::size_t>(r.gold_index)));
  j["rationale"] = r.rationale;
  j["provenance"] = r.provenance;
  j["seed"] = r.seed;
  j["state"] = r.state;
  j["check"] = r.check;
  return j;
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

QuestionRecord record_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  QuestionRecord r;
  r.id = field<std::string>(j, "id");
  r.domain = field<std::string>(j, "domain");
  r.problem_file = field<std::string>(j, "problem");
  const auto task = parse_task(field<std::string>(j, "task"));
  if (!task) throw std::invalid_argument("unknown task '" + j["task"].get<std::string>() + "'");
  r.task = *task;
  const auto qtype = parse_qtype(field<std::string>(j, "qtype"));
  if (!qtype) throw std::invalid_argument("unknown qtype '" + j["qtype"].get<std::string>() + "'");
  r.qtype = *qtype;
  r.context = field<std::string>(j, "context");
  r.question = field<std::string>(j, "question");
  r.options = field<std::vector<std::string>>(j, "options");
  const auto answer = field<std::string>(j, "answer");
  if (r.qtype == QType::boolean) {
    if (answer != "yes" && answer != "no") throw std::invalid_argument("bool answer must be yes or no, got '" + answer + "'");
    r.gold_yes = answer == "yes";
  } else {
    if (answer.size() != 1 || answer[0] < 'A' || answer[0] > 'Z')
      throw std::invalid_argument("mcq answer must be a letter, got '" + answer + "'");
    r.gold_index = answer[0] - 'A';
  }
  r.rationale = field<std::string>(j, "rationale");
  r.provenance = field<std::string>(j, "provenance");
  r.seed = field<std::uint64_t>(j, "seed");
  r.state = field<std::vector<std::string>>(j, "state");
  r.check = j.contains("check") ? j["check"] : json();
  validate_record(r);
  return r;
}

void validate_record(const QuestionRecord& r) {
  if (r.id.empty()) throw std::invalid_argument("empty id");
  if (r.context.empty() || r.question.empty()) throw std::invalid_argument("empty context or question");
  if (r.qtype == QType::boolean) {
    if (!r.options.empty()) throw std::invalid_argument("bool record carries options");
    return;
  }
  if (r.options.size() != 4)
    throw std::invalid_argument("mcq record needs 4 options, has " + std::to_string(r.options.size()));
  if (r.gold_index < 0 || r.gold_index > 3)
    throw std::invalid_argument("gold index " + std::to_string(r.gold_index) + " out of range");
  std::set<std::string> distinct(r.options.begin(), r.options.end());
  if (distinct.size() != 4) throw std::invalid_argument("mcq options are not distinct");
}

std::string serialize_dataset(const DatasetFile& file) {
  json header{{"kind", "planq-dataset"},
              {"format_version", file.header.format_version},
              {"generator_version", file.header.generator_version},
              {"seed", file.header.seed},
              {"config", file.header.config},
              {"records", file.records.size()}};
  std::string out = header.dump(-1, ' ', false, json::error_handler_t::strict) + "\n";
  std::set<std::string> ids;
  for (const auto& r : file.records) {
    validate_record(r);
    if (!ids.insert(r.id).second) throw std::invalid_argument("duplicate record id " + r.id);
    out += record_to_json(r).dump(-1, ' ', false, json::error_handler_t::strict);
    out += '\n';
  }
  return out;
}

void write_dataset(const DatasetFile& file, const std::filesystem::path& path) {
  const std::string text = serialize_dataset(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(path.string(), 0, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw DatasetError(path.string(), 0, "write failed");
}

DatasetFile parse_dataset(const std::string& text, const std::string& source) {
  DatasetFile file;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::optional<std::size_t> declared;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(source, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!have_header) {
      if (!j.is_object() || j.value("kind", "") != "planq-dataset")
        throw DatasetError(source, lineno, "missing dataset header line");
      const int version = j.value("format_version", -1);
      if (version != kFormatVersion)
        throw DatasetError(source, lineno,
                           "incompatible format version " + std::to_string(version) + " (expected " +
                               std::to_string(kFormatVersion) + ")");
      file.header.format_version = version;
      file.header.generator_version = j.value("generator_version", "");
      file.header.seed = j.value("seed", std::uint64_t{0});
      file.header.config = j.value("config", json::object());
      if (j.contains("records")) declared = j["records"].get<std::size_t>();
      have_header = true;
      continue;
    }
    try {
      auto r = record_from_json(j);
      if (!ids.insert(r.id).second) throw std::invalid_argument("duplicate id " + r.id);
      file.records.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw DatasetError(source, lineno, e.what());
    }
  }
  if (!have_header) throw DatasetError(source, 0, "empty dataset file");
  if (declared && *declared != file.records.size())
    throw DatasetError(source, 0,
                       "header declares " + std::to_string(*declared) + " records, found " +
                           std::to_string(file.records.size()));
  return file;
}

DatasetFile read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string(), 0, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.string());
}

std::pair<std::vector<QuestionRecord>, std::vector<QuestionRecord>> split(
    const std::vector<QuestionRecord>& records, const std::vector<std::string>& train_problems,
    const std::vector<std::string>& test_problems) {
  const std::set<std::string> train(train_problems.begin(), train_problems.end());
  const std::set<std::string> test(test_problems.begin(), test_problems.end());
  for (const auto& p : train)
    if (test.contains(p)) throw ConfigError("problem '" + p + "' is in both the train and the test list");
  auto in = [](const std::set<std::string>& set, const QuestionRecord& r) {
    return set.contains(r.problem_file) || set.contains(r.domain + "/" + r.problem_file);
  };
  std::pair<std::vector<QuestionRecord>, std::vector<QuestionRecord>> out;
  for (const auto& r : records) {
    const bool a = in(train, r), b = in(test, r);
    if (a && b) throw ConfigError("record " + r.id + " matches both the train and the test list");
    if (!a && !b) throw ConfigError("record " + r.id + " (" + r.domain + "/" + r.problem_file + ") is in neither list");
    (a ? out.first : out.second).push_back(r);
  }
  return out;
}

}  // namespace planq
