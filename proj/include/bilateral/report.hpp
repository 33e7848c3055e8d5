#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bilateral/bench.hpp"

namespace bilateral {

inline constexpr const char* kToolVersion = "0.1.0";

/// Summary metrics for one run, with bootstrap standard errors.
struct MetricsReport {
  EvalMode mode = EvalMode::Bilateral;
  std::size_t record_count = 0;

  std::optional<double> macro_f1;  // absent when undefined on the full set
  std::string macro_f1_note;
  BootstrapResult macro_f1_boot;

  double coverage_value = 0.0;
  BootstrapResult coverage_boot;

  double mean_time = 0.0;
  BootstrapResult mean_time_boot;
  double mean_tokens_value = 0.0;
  BootstrapResult mean_tokens_boot;

  /// Bilateral runs only: the full 9-pair distribution and its 4+other
  /// collapse.
  std::map<std::string, double> tv_distribution;
  std::map<std::string, double> collapsed;
  std::map<std::string, BootstrapResult> collapsed_boot;

  int n_resamples = 1000;
  int subsample_size = 100;
  std::uint64_t seed = 0;
};

MetricsReport build_report(std::span<const EvaluationRecord> records, int n_resamples = 1000,
                           int subsample_size = 100, std::uint64_t seed = 0);

/// Aligned text tables (summary metrics, then the truth-value distribution
/// for bilateral runs), SEs in parentheses.
std::string render_report_text(const MetricsReport& report);

nlohmann::json report_to_json(const MetricsReport& report);

struct RunManifest {
  std::string command;
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;
  std::string finished_at;
  std::string version = kToolVersion;
  std::map<std::string, std::string> settings;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& file);

}  // namespace bilateral
