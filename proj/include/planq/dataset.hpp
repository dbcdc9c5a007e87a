#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "planq/taskgen.hpp"
#include "json.hpp"

namespace planq {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kGeneratorVersion = "planq-gen/1";

struct DatasetHeader {
  int format_version = kFormatVersion;
  std::string generator_version = kGeneratorVersion;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
};

struct DatasetFile {
  DatasetHeader header;
  std::vector<QuestionRecord> records;
};

/// Schema or I/O problem; line is 1-based, 0 when not tied to a line.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& where, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

nlohmann::json record_to_json(const QuestionRecord& r);
/// Throws std::invalid_argument naming the offending field.
QuestionRecord record_from_json(const nlohmann::json& j);
/// Structural checks shared by reader and writer.
void validate_record(const QuestionRecord& r);

/// Header line followed by one record per line; keys sorted, LF endings.
std::string serialize_dataset(const DatasetFile& file);
void write_dataset(const DatasetFile& file, const std::filesystem::path& path);
DatasetFile parse_dataset(const std::string& text, const std::string& source = "<memory>");
DatasetFile read_dataset(const std::filesystem::path& path);

/// Routes records by problem file. Entries match either "p03.pddl" or
/// "ferry/p03.pddl". Overlapping lists or unrouted records are errors.
std::pair<std::vector<QuestionRecord>, std::vector<QuestionRecord>> split(
    const std::vector<QuestionRecord>& records, const std::vector<std::string>& train_problems,
    const std::vector<std::string>& test_problems);

}  // namespace planq
