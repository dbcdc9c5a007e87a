#ifdef PLANQ_HTTPS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <cstdlib>

#include "planq/error.hpp"
#include "planq/evalharness.hpp"

namespace planq {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpClient : public CompletionClient {
 public:
  explicit HttpClient(EndpointConfig cfg) : cfg_(std::move(cfg)), url_(split_url(cfg_.url)) {
#ifndef PLANQ_HTTPS
    if (cfg_.url.rfind("https://", 0) == 0) throw ConfigError("this build has no TLS support; use an http:// endpoint");
#endif
    if (!cfg_.token_env.empty())
      if (const char* tok = std::getenv(cfg_.token_env.c_str())) token_ = tok;
  }

  std::string complete(const std::string& prompt, const QuestionRecord&) override {
    nlohmann::json body{{"model", cfg_.model}, {"max_tokens", cfg_.max_new_tokens}, {"temperature", cfg_.temperature}};
    if (cfg_.api == "chat")
      body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    else
      body["prompt"] = prompt;

    httplib::Client client(url_.origin);
    client.set_connection_timeout(cfg_.timeout_seconds, 0);
    client.set_read_timeout(cfg_.timeout_seconds, 0);
    client.set_write_timeout(cfg_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    auto res = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!res) {
      const auto err = res.error();
      const std::string what = cfg_.url + ": " + httplib::to_string(err);
      if (err == httplib::Error::Connection || err == httplib::Error::SSLConnection) throw EndpointUnreachable(what);
      throw TransientError(what);
    }
    if (res->status == 429 || res->status >= 500)
      throw TransientError(cfg_.url + ": HTTP " + std::to_string(res->status));
    if (res->status != 200) throw std::runtime_error(cfg_.url + ": HTTP " + std::to_string(res->status) + ": " + res->body);
    try {
      const auto j = nlohmann::json::parse(res->body);
      const auto& choice = j.at("choices").at(0);
      if (cfg_.api == "chat") return choice.at("message").at("content").get<std::string>();
      return choice.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(cfg_.url + ": unexpected response: " + e.what());
    }
  }

 private:
  EndpointConfig cfg_;
  Url url_;
  std::string token_;
};

}  // namespace

std::unique_ptr<CompletionClient> make_http_client(const EndpointConfig& cfg) {
  cfg.validate();
  return std::make_unique<HttpClient>(cfg);
}

}  // namespace planq
