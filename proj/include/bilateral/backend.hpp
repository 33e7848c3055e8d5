#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace bilateral {

struct ChatResult {
  std::string text;
  /// Total tokens reported by the backend's usage metadata, absent when the
  /// backend does not report usage.
  std::optional<long> total_tokens;
};

/// A chat-completion endpoint: one prompt in, one completion out. Implementations
/// must be safe for concurrent calls.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResult complete(const std::string& prompt, double temperature) = 0;  // BackendError
  virtual std::string describe() const = 0;
};

/// Retries transient failures; rethrows the last error once attempts are
/// exhausted. attempts = 1 + max_retries.
ChatResult complete_with_retries(ChatBackend& backend, const std::string& prompt,
                                 double temperature, int max_retries);

struct HttpBackendOptions {
  std::string base_url;  // e.g. "https://api.openai.com/v1"
  std::string model;
  std::string api_key;  // sent as a bearer token when non-empty
  int timeout_ms = 60000;
};

/// Chat-completion client for OpenAI-compatible endpoints: POSTs
/// {model, messages, temperature} to {base_url}/chat/completions with the
/// prompt as a single user message, and reads choices[0].message.content
/// plus usage.total_tokens.
class HttpBackend final : public ChatBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ChatResult complete(const std::string& prompt, double temperature) override;
  std::string describe() const override;

 private:
  HttpBackendOptions options_;
  std::string host_;  // scheme://authority
  std::string path_prefix_;
};

/// Deterministic scripted backend, so the full pipeline runs with no
/// network. A fixture is a default response set plus ordered rules; the
/// first rule whose `match` occurs in the prompt wins. The response text is
/// picked per prompt kind, recognized from the template's marker
/// instructions (refutation mentions CANNOT REFUTE, verification CANNOT
/// VERIFY, negative generation negative_answers, anything else unilateral).
class MockBackend final : public ChatBackend {
 public:
  struct Responses {
    std::string verification;
    std::string refutation;
    std::string unilateral;
    std::string negative;
    bool fail = false;  // simulate a backend failure for matching prompts
  };
  struct Rule {
    std::string match;
    Responses responses;
  };

  MockBackend();  // abstains on every prompt
  MockBackend(std::vector<Rule> rules, Responses fallback);
  static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& fixture);

  ChatResult complete(const std::string& prompt, double temperature) override;
  std::string describe() const override;

  /// Number of completed (non-failing) calls; lets tests assert that cached
  /// reruns never reach the backend.
  long call_count() const;

 private:
  std::vector<Rule> rules_;
  Responses fallback_;
  mutable std::mutex mutex_;
  long calls_ = 0;
};

}  // namespace bilateral
