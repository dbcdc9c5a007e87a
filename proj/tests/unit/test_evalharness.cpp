#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "planq/evalharness.hpp"
#include "helpers.hpp"
#ifdef PLANQ_HTTPS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

using namespace planq;
using namespace testing_support;

namespace {

QuestionRecord bool_record(std::string id, bool yes, std::string task = "app", std::string domain = "ferry") {
  QuestionRecord r;
  r.id = std::move(id);
  r.domain = std::move(domain);
  r.problem_file = "p02.pddl";
  r.task = *parse_task(task);
  r.qtype = QType::boolean;
  r.context = "Context.";
  r.question = "Is it?";
  r.gold_yes = yes;
  r.rationale = "Because.";
  return r;
}

QuestionRecord mcq_record(std::string id, int gold) {
  QuestionRecord r = bool_record(std::move(id), false);
  r.qtype = QType::mcq;
  r.question = "Which one?";
  r.options = {"first thing", "second thing", "third thing", "fourth thing"};
  r.gold_index = gold;
  return r;
}

Transcript transcript(const std::string& task, const std::string& qtype, const std::string& domain,
                      const std::string& gold, const std::string& completion) {
  Transcript t;
  t.id = task + domain + completion + std::to_string(std::rand());
  t.domain = domain;
  t.task = task;
  t.qtype = qtype;
  t.gold = gold;
  t.completion = completion;
  if (qtype == "mcq") t.options = {"a1", "a2", "a3", "a4"};
  return t;
}

}  // namespace

TEST(Extract, FixtureCorpus) {
  std::ifstream in(test_data() / "extract_fixtures.jsonl");
  std::size_t n = 0;
  for (std::string line; std::getline(in, line); ++n) {
    const auto j = nlohmann::json::parse(line);
    const auto got = extract_answer(j["completion"], *parse_qtype(j["qtype"].get<std::string>()),
                                    j["options"].get<std::vector<std::string>>());
    EXPECT_EQ(extracted_id(got), j["expected"].get<std::string>()) << j["completion"];
  }
  EXPECT_EQ(n, 50u);
}

TEST(Extract, Correctness) {
  const auto b = bool_record("x", true);
  EXPECT_TRUE(is_correct(b, extract_answer("Final Answer: Yes.", QType::boolean)));
  EXPECT_FALSE(is_correct(b, extract_answer("Final Answer: No.", QType::boolean)));
  EXPECT_FALSE(is_correct(b, extract_answer("dunno", QType::boolean)));
  const auto m = mcq_record("y", 2);
  EXPECT_TRUE(is_correct(m, extract_answer("Final Answer: C.", QType::mcq, m.options)));
  EXPECT_TRUE(is_correct(m, extract_answer("Final Answer: third thing", QType::mcq, m.options)));
}

TEST(Prompt, ZeroShotIoAndCot) {
  const auto r = mcq_record("m", 1);
  EXPECT_EQ(question_block(r), "**Question**: Context.  Which one?\nA. first thing.\nB. second thing.\nC. third "
                               "thing.\nD. fourth thing.");
  const ExemplarStore none;
  EXPECT_EQ(build_prompt(r, {PromptMode::io, 0}, none), question_block(r) + "\n**Final Answer**:");
  EXPECT_EQ(build_prompt(r, {PromptMode::cot, 0}, none),
            question_block(r) + "\n**Thoughts**: Let's think step by step.");
  EXPECT_EQ(gold_answer_text(r), "B");
  EXPECT_EQ(gold_answer_text(bool_record("b", false)), "No");
}

TEST(Prompt, TwoShotNeedsTwoExemplars) {
  ExemplarStore store({bool_record("e1", false), bool_record("e2", true)});
  const auto target = bool_record("t", true);
  const auto p = build_prompt(target, {PromptMode::io, 2}, store);
  EXPECT_EQ(p, "**Question**: Context.  Is it?\n**Final Answer**: No.\n"
               "**Question**: Context.  Is it?\n**Final Answer**: Yes.\n"
               "**Question**: Context.  Is it?\n**Final Answer**:");
  EXPECT_THROW(build_prompt(bool_record("t", true, "prog"), {PromptMode::io, 2}, store), ConfigError);
  EXPECT_THROW(build_prompt(target, {PromptMode::io, 1}, store), ConfigError);
}

TEST(Prompt, ExemplarsMustBeDisjoint) {
  auto e = bool_record("e1", false);
  e.problem_file = "p01.pddl";
  ExemplarStore store({e});
  EXPECT_NO_THROW(store.check_disjoint({bool_record("t", true)}));
  auto clash = bool_record("t", true);
  clash.problem_file = "p01.pddl";
  EXPECT_THROW(store.check_disjoint({clash}), ConfigError);
}

TEST(Mocks, GoldIsPerfectRandomIsNear) {
  std::vector<QuestionRecord> recs;
  for (int i = 0; i < 400; ++i) recs.push_back(bool_record("b" + std::to_string(i), i % 2 == 0));
  for (int i = 0; i < 400; ++i) recs.push_back(mcq_record("m" + std::to_string(i), i % 4));
  GoldMock gold;
  EvalOptions opt;
  opt.style = {PromptMode::io, 0};
  const auto g = score(evaluate(recs, gold, {}, opt));
  EXPECT_DOUBLE_EQ(g.mean.at("bool"), 100.0);
  EXPECT_DOUBLE_EQ(g.mean.at("mcq"), 100.0);
  RandomMock rnd(5);
  const auto ts = evaluate(recs, rnd, {}, opt);
  const auto s = score(ts);
  EXPECT_NEAR(s.mean.at("bool"), 50.0, 7.5);
  EXPECT_NEAR(s.mean.at("mcq"), 25.0, 7.5);
  EXPECT_EQ(s.failures, 0u);
  RandomMock again(5);
  const auto ts2 = evaluate(recs, again, {}, opt);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(ts[i].completion, ts2[i].completion);
}

TEST(Score, MeanIsOverTasksNotItems) {
  std::vector<Transcript> ts;
  for (int i = 0; i < 4; ++i) ts.push_back(transcript("app", "bool", "ferry", "yes", i < 3 ? "Yes" : "No"));
  for (int i = 0; i < 2; ++i) ts.push_back(transcript("prog", "bool", "swap", "no", i < 1 ? "No" : "maybe"));
  ts.push_back(transcript("app", "mcq", "ferry", "C", "Final Answer: C"));
  auto err = transcript("app", "mcq", "ferry", "A", "");
  err.errored = true;
  ts.push_back(err);
  const auto rep = score(ts);
  EXPECT_DOUBLE_EQ(rep.tasks.at({"app", "bool"}).accuracy(), 75.0);
  EXPECT_DOUBLE_EQ(rep.tasks.at({"prog", "bool"}).accuracy(), 50.0);
  EXPECT_DOUBLE_EQ(rep.mean.at("bool"), 62.5);
  EXPECT_DOUBLE_EQ(rep.mean.at("mcq"), 100.0);
  EXPECT_EQ(rep.total, 8u);
  EXPECT_EQ(rep.errored, 1u);
  EXPECT_EQ(rep.failures, 1u);

  std::istringstream csv(report_csv(rep));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "scope,task,qtype,domain,correct,scored,failures,errored,accuracy");
  std::map<std::string, std::string> means;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (line.back() == ',') cols.push_back("");
    ASSERT_EQ(cols.size(), 9u) << line;
    if (cols[0] == "mean") means[cols[2]] = cols[8];
  }
  EXPECT_EQ(means["bool"], "62.50");
  EXPECT_EQ(means["mcq"], "100.00");
  const auto table = report_table(rep);
  EXPECT_NE(table.find("62.50"), std::string::npos);
  for (std::istringstream t(table); std::getline(t, line);)
    if (!line.empty()) { EXPECT_NE(line.back(), ' '); }
}

TEST(Transcripts, JsonRoundTripAndValidation) {
  auto t = transcript("land", "mcq", "swap", "D", "Final Answer: D");
  t.prompt = "p";
  const auto back = transcript_from_json(transcript_to_json(t));
  EXPECT_EQ(back.id, t.id);
  EXPECT_EQ(back.options, t.options);
  EXPECT_EQ(back.gold, "D");
  auto bad = transcript_to_json(t);
  bad["task"] = "nope";
  EXPECT_THROW(transcript_from_json(bad), std::invalid_argument);
  bad = transcript_to_json(t);
  bad["gold"] = "yes";
  EXPECT_THROW(transcript_from_json(bad), std::invalid_argument);
}

namespace {

struct LocalServer {
  httplib::Server srv;
  int port = 0;
  std::thread th;
  std::atomic<int> hits{0};
  std::string last_auth, last_body;
  std::mutex mu;
  int fail_first = 0;

  LocalServer() {
    srv.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      if (hits.fetch_add(1) < fail_first) {
        res.status = 503;
        return;
      }
      res.set_content(R"({"choices":[{"text":" Yes.\n**Final Answer**: Yes."}]})", "application/json");
    });
    srv.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      ++hits;
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"**Final Answer**: B."}}]})",
                      "application/json");
    });
    srv.Post("/v1/bad", [](const httplib::Request&, httplib::Response& res) { res.status = 400; });
    port = srv.bind_to_any_port("127.0.0.1");
    th = std::thread([this] { srv.listen_after_bind(); });
    srv.wait_until_ready();
  }
  ~LocalServer() {
    srv.stop();
    th.join();
  }
  void record(const httplib::Request& req) {
    std::lock_guard<std::mutex> lock(mu);
    last_auth = req.get_header_value("Authorization");
    last_body = req.body;
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port) + path; }
};

}  // namespace

TEST(HttpClient, CompletionsAndChat) {
  LocalServer server;
  ::setenv("PLANQ_TEST_TOKEN", "sekrit", 1);
  EndpointConfig cfg;
  cfg.url = server.url("/v1/completions");
  cfg.token_env = "PLANQ_TEST_TOKEN";
  cfg.model = "m1";
  cfg.max_new_tokens = 17;
  auto client = make_http_client(cfg);
  EXPECT_EQ(client->complete("hello prompt", bool_record("x", true)), " Yes.\n**Final Answer**: Yes.");
  {
    std::lock_guard<std::mutex> lock(server.mu);
    EXPECT_EQ(server.last_auth, "Bearer sekrit");
    const auto body = nlohmann::json::parse(server.last_body);
    EXPECT_EQ(body["prompt"], "hello prompt");
    EXPECT_EQ(body["model"], "m1");
    EXPECT_EQ(body["max_tokens"], 17);
  }

  cfg.url = server.url("/v1/chat/completions");
  cfg.api = "chat";
  auto chat = make_http_client(cfg);
  EXPECT_EQ(chat->complete("hi", bool_record("x", true)), "**Final Answer**: B.");
  {
    std::lock_guard<std::mutex> lock(server.mu);
    const auto body = nlohmann::json::parse(server.last_body);
    EXPECT_EQ(body["messages"][0]["content"], "hi");
  }

  cfg.url = server.url("/v1/bad");
  cfg.api = "completions";
  EXPECT_THROW(make_http_client(cfg)->complete("x", bool_record("x", true)), std::runtime_error);
}

TEST(HttpClient, RetriesTransientFailures) {
  LocalServer server;
  server.fail_first = 2;
  EndpointConfig cfg;
  cfg.url = server.url("/v1/completions");
  auto client = make_http_client(cfg);
  EvalOptions opt;
  opt.style = {PromptMode::io, 0};
  opt.retries = 3;
  opt.backoff_ms = 1;
  opt.concurrency = 1;
  const auto ts = evaluate({bool_record("r", true)}, *client, {}, opt);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_FALSE(ts[0].errored) << ts[0].error;
  EXPECT_TRUE(ts[0].correct);
  EXPECT_EQ(server.hits.load(), 3);
}

TEST(HttpClient, UnreachableEndpoint) {
  int port;
  {
    LocalServer s;
    port = s.port;
  }
  EndpointConfig cfg;
  cfg.url = "http://127.0.0.1:" + std::to_string(port) + "/v1/completions";
  cfg.timeout_seconds = 2;
  auto client = make_http_client(cfg);
  EXPECT_THROW(client->complete("x", bool_record("x", true)), EndpointUnreachable);
  EvalOptions opt;
  opt.style = {PromptMode::io, 0};
  opt.retries = 1;
  opt.backoff_ms = 1;
  EXPECT_THROW(evaluate({bool_record("a", true), bool_record("b", false)}, *client, {}, opt), EndpointUnreachable);
}

TEST(Endpoint, Validation) {
  EndpointConfig cfg;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.url = "ftp://x";
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.url = "https://example.invalid/v1/completions";
  EXPECT_NO_THROW(cfg.validate());
  cfg.api = "graphql";
  EXPECT_THROW(cfg.validate(), ConfigError);
}
