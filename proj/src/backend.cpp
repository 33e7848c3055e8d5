#include "bilateral/backend.hpp"

#include <fstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bilateral/errors.hpp"

namespace bilateral {

using json = nlohmann::json;

ChatResult complete_with_retries(ChatBackend& backend, const std::string& prompt,
                                 double temperature, int max_retries) {
  const int attempts = 1 + (max_retries > 0 ? max_retries : 0);
  for (int attempt = 1;; ++attempt) {
    try {
      return backend.complete(prompt, temperature);
    } catch (const BackendError&) {
      if (attempt >= attempts) {
        throw;
      }
    }
  }
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  const std::string& url = options_.base_url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("backend base_url must start with http:// or https://, got: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = url;
    path_prefix_.clear();
  } else {
    host_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
  }
  while (!path_prefix_.empty() && path_prefix_.back() == '/') {
    path_prefix_.pop_back();
  }
}

ChatResult HttpBackend::complete(const std::string& prompt, double temperature) {
  httplib::Client client(host_);
  client.set_connection_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
  client.set_read_timeout(options_.timeout_ms / 1000, (options_.timeout_ms % 1000) * 1000);
  httplib::Headers headers;
  if (!options_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.api_key);
  }

  const json body{{"model", options_.model},
                  {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
                  {"temperature", temperature}};

  auto res = client.Post(path_prefix_ + "/chat/completions", headers, body.dump(),
                         "application/json");
  if (!res) {
    throw BackendError("backend request failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("backend returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }

  json doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) {
    throw BackendError("backend returned invalid JSON");
  }
  ChatResult result;
  try {
    result.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw BackendError(std::string("backend response missing completion text: ") + e.what());
  }
  if (doc.contains("usage") && doc["usage"].contains("total_tokens")) {
    result.total_tokens = doc["usage"]["total_tokens"].get<long>();
  }
  return result;
}

std::string HttpBackend::describe() const { return host_ + " model=" + options_.model; }

MockBackend::MockBackend() {
  fallback_.verification = "CANNOT VERIFY";
  fallback_.refutation = "CANNOT REFUTE";
  fallback_.unilateral = "FALSE";
  fallback_.negative = "{\"negative_answers\": [\"n1\", \"n2\", \"n3\"]}";
}

MockBackend::MockBackend(std::vector<Rule> rules, Responses fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

namespace {

MockBackend::Responses responses_from_json(const json& j) {
  MockBackend::Responses out;
  out.verification = j.value("verification", "");
  out.refutation = j.value("refutation", "");
  out.unilateral = j.value("unilateral", "");
  out.negative = j.value("negative", "");
  out.fail = j.value("fail", false);
  return out;
}

}  // namespace

std::shared_ptr<MockBackend> MockBackend::from_file(const std::filesystem::path& fixture) {
  std::ifstream in(fixture);
  if (!in) {
    throw ConfigError("cannot open mock fixture: " + fixture.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("invalid mock fixture " + fixture.string() + ": " + e.what());
  }
  Responses fallback;
  if (doc.contains("default")) {
    fallback = responses_from_json(doc["default"]);
  }
  std::vector<Rule> rules;
  for (const auto& item : doc.value("rules", json::array())) {
    Rule rule;
    rule.match = item.at("match").get<std::string>();
    rule.responses = responses_from_json(item);
    rules.push_back(std::move(rule));
  }
  return std::make_shared<MockBackend>(std::move(rules), std::move(fallback));
}

ChatResult MockBackend::complete(const std::string& prompt, double /*temperature*/) {
  const Responses* chosen = &fallback_;
  for (const auto& rule : rules_) {
    if (prompt.find(rule.match) != std::string::npos) {
      chosen = &rule.responses;
      break;
    }
  }
  if (chosen->fail) {
    throw BackendError("mock backend scripted failure");
  }

  // Recognize the prompt kind from its marker instructions.
  const std::string* text;
  if (prompt.find("CANNOT REFUTE") != std::string::npos) {
    text = &chosen->refutation;
  } else if (prompt.find("CANNOT VERIFY") != std::string::npos) {
    text = &chosen->verification;
  } else if (prompt.find("negative_answers") != std::string::npos) {
    text = &chosen->negative;
  } else {
    text = &chosen->unilateral;
  }

  std::lock_guard lock(mutex_);
  ++calls_;
  return ChatResult{*text, std::nullopt};
}

std::string MockBackend::describe() const { return "mock"; }

long MockBackend::call_count() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

}  // namespace bilateral
