#include <gtest/gtest.h>

#include "planq/dataset.hpp"
#include "planq/pipeline.hpp"
#include "helpers.hpp"

using namespace planq;
using namespace testing_support;

namespace {

const std::vector<QuestionRecord>& small_batch() {
  static const std::vector<QuestionRecord> records = [] {
    CatalogOptions opt;
    opt.domains = {"ferry"};
    opt.problems_glob = "p0[23].pddl";
    const auto cat = load_catalog(domains_dir(), opt);
    DomainProblems dp{"ferry", {}};
    for (const auto& p : cat[0].problems) dp.problems.push_back(p->context.get());
    GenBatch cfg;
    cfg.per_domain = 2;
    cfg.seed = 3;
    return assemble_batch({dp}, cfg).records;
  }();
  return records;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join_lines(const std::vector<std::string>& ls) {
  std::string out;
  for (const auto& l : ls) out += l + "\n";
  return out;
}

}  // namespace

TEST(Dataset, RoundTripIsByteExact) {
  DatasetFile f;
  f.header.seed = 3;
  f.header.config = {{"per_domain", 2}};
  f.records = small_batch();
  const auto text = serialize_dataset(f);
  const auto back = parse_dataset(text);
  EXPECT_EQ(back.header.seed, 3u);
  EXPECT_EQ(back.header.generator_version, kGeneratorVersion);
  ASSERT_EQ(back.records.size(), f.records.size());
  for (std::size_t i = 0; i < f.records.size(); ++i) {
    const auto& a = f.records[i];
    const auto& b = back.records[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.question, b.question);
    EXPECT_EQ(a.options, b.options);
    EXPECT_EQ(a.gold_yes, b.gold_yes);
    EXPECT_EQ(a.gold_index, b.gold_index);
    EXPECT_EQ(a.check, b.check);
    EXPECT_EQ(a.state, b.state);
  }
  EXPECT_EQ(serialize_dataset(back), text);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Dataset, RecordKeysAreSorted) {
  const auto j = record_to_json(small_batch().front());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
  for (const char* k : {"id", "domain", "problem", "task", "qtype", "context", "question", "answer", "rationale"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Dataset, OutOfRangeGoldNamesLine) {
  DatasetFile f;
  f.records = small_batch();
  auto ls = lines(serialize_dataset(f));
  std::size_t target = 0;
  for (std::size_t i = 1; i < ls.size() && !target; ++i)
    if (ls[i].find("\"qtype\":\"mcq\"") != std::string::npos) target = i;
  ASSERT_NE(target, 0u);
  auto j = nlohmann::json::parse(ls[target]);
  j["answer"] = "H";
  ls[target] = j.dump();
  try {
    parse_dataset(join_lines(ls), "data.jsonl");
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), target + 1);
    EXPECT_NE(std::string(e.what()).find("data.jsonl:" + std::to_string(target + 1)), std::string::npos) << e.what();
  }
}

TEST(Dataset, RejectsBadFiles) {
  DatasetFile f;
  f.records = small_batch();
  auto ls = lines(serialize_dataset(f));

  auto header = nlohmann::json::parse(ls[0]);
  header["format_version"] = kFormatVersion + 1;
  auto bumped = ls;
  bumped[0] = header.dump();
  try {
    parse_dataset(join_lines(bumped));
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_NE(std::string(e.what()).find("incompatible format version"), std::string::npos);
  }

  auto dup = ls;
  dup.push_back(ls[1]);
  EXPECT_THROW(parse_dataset(join_lines(dup)), DatasetError);

  auto short_file = ls;
  short_file.pop_back();
  EXPECT_THROW(parse_dataset(join_lines(short_file)), DatasetError);

  auto garbage = ls;
  garbage[2] = "{not json";
  try {
    parse_dataset(join_lines(garbage));
    FAIL();
  } catch (const DatasetError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_dataset(""), DatasetError);
  EXPECT_THROW(parse_dataset(join_lines({ls[1]})), DatasetError);
}

TEST(Dataset, ValidateRecord) {
  auto r = small_batch().front();
  EXPECT_NO_THROW(validate_record(r));
  auto mcq = *std::find_if(small_batch().begin(), small_batch().end(), [](auto& x) { return x.qtype == QType::mcq; });
  mcq.options[1] = mcq.options[0];
  EXPECT_THROW(validate_record(mcq), std::invalid_argument);
  auto b = *std::find_if(small_batch().begin(), small_batch().end(), [](auto& x) { return x.qtype == QType::boolean; });
  b.options = {"x"};
  EXPECT_THROW(validate_record(b), std::invalid_argument);
}

TEST(Dataset, FileRoundTrip) {
  DatasetFile f;
  f.records = small_batch();
  const auto path = std::filesystem::temp_directory_path() / "planq_dataset_test.jsonl";
  write_dataset(f, path);
  EXPECT_EQ(read_dataset(path).records.size(), f.records.size());
  std::filesystem::remove(path);
  EXPECT_THROW(read_dataset(path), DatasetError);
}

TEST(Split, RoutesByProblem) {
  const auto& recs = small_batch();
  const auto [train, test] = split(recs, {"p02.pddl"}, {"ferry/p03.pddl"});
  EXPECT_EQ(train.size() + test.size(), recs.size());
  for (const auto& r : train) EXPECT_EQ(r.problem_file, "p02.pddl");
  for (const auto& r : test) EXPECT_EQ(r.problem_file, "p03.pddl");
  EXPECT_FALSE(train.empty());
  EXPECT_FALSE(test.empty());
}

TEST(Split, OverlapAndUnroutedAreErrors) {
  const auto& recs = small_batch();
  EXPECT_THROW(split(recs, {"p02.pddl"}, {"p02.pddl", "p03.pddl"}), ConfigError);
  EXPECT_THROW(split(recs, {"p02.pddl"}, {"ferry/p02.pddl", "p03.pddl"}), ConfigError);
  EXPECT_THROW(split(recs, {"p02.pddl"}, {}), ConfigError);
}
