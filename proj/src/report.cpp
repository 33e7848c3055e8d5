#include "bilateral/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bilateral/errors.hpp"

namespace bilateral {

using json = nlohmann::json;

MetricsReport build_report(std::span<const EvaluationRecord> records, int n_resamples,
                           int subsample_size, std::uint64_t seed) {
  if (records.empty()) {
    throw EmptyRecordsError("cannot report on an empty record set");
  }
  MetricsReport report;
  report.mode = records.front().mode;
  report.record_count = records.size();
  report.n_resamples = n_resamples;
  report.subsample_size = subsample_size;
  report.seed = seed;

  try {
    report.macro_f1 = macro_f1_given_abstention(records);
  } catch (const UndefinedMetricError& e) {
    report.macro_f1_note = e.what();
  }
  report.coverage_value = coverage(records);
  report.mean_time = mean_elapsed(records);
  report.mean_tokens_value = mean_tokens(records);

  auto bootstrap = [&](const MetricFn& metric) -> BootstrapResult {
    try {
      return bootstrap_se(records, metric, n_resamples, subsample_size, seed);
    } catch (const UndefinedMetricError&) {
      return BootstrapResult{0.0, 0.0, static_cast<std::size_t>(n_resamples)};
    }
  };

  if (report.macro_f1) {
    report.macro_f1_boot = bootstrap(
        [](std::span<const EvaluationRecord> r) { return macro_f1_given_abstention(r); });
  }
  report.coverage_boot =
      bootstrap([](std::span<const EvaluationRecord> r) { return coverage(r); });
  report.mean_time_boot =
      bootstrap([](std::span<const EvaluationRecord> r) { return mean_elapsed(r); });
  report.mean_tokens_boot =
      bootstrap([](std::span<const EvaluationRecord> r) { return mean_tokens(r); });

  if (report.mode == EvalMode::Bilateral) {
    report.tv_distribution = truth_value_distribution(records);
    report.collapsed = collapse_distribution(report.tv_distribution);
    for (const auto& [code, fraction] : report.collapsed) {
      const std::string wanted = code;
      report.collapsed_boot[code] = bootstrap([wanted](std::span<const EvaluationRecord> r) {
        return collapse_distribution(truth_value_distribution(r)).at(wanted);
      });
    }
  }
  return report;
}

namespace {

std::string fmt(double value, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

std::string cell(double value, double se) {
  return fmt(value) + " (" + fmt(se) + ")";
}

void append_row(std::ostringstream& out, const std::string& label, const std::string& value) {
  out << label;
  for (std::size_t i = label.size(); i < 28; ++i) {
    out << ' ';
  }
  out << value << '\n';
}

}  // namespace

std::string render_report_text(const MetricsReport& report) {
  std::ostringstream out;
  out << "Mode: " << to_string(report.mode) << "   Records: " << report.record_count
      << "   Bootstrap: " << report.n_resamples << " x " << report.subsample_size
      << " (seed " << report.seed << ")\n\n";

  out << "Metric                      Value (SE)\n";
  out << "--------------------------  ----------------\n";
  if (report.macro_f1) {
    append_row(out, "Macro F1 (given abstention)",
               cell(*report.macro_f1, report.macro_f1_boot.se));
  } else {
    append_row(out, "Macro F1 (given abstention)", "undefined: " + report.macro_f1_note);
  }
  append_row(out, "Coverage", cell(report.coverage_value, report.coverage_boot.se));
  append_row(out, "Mean time (s)", cell(report.mean_time, report.mean_time_boot.se));
  append_row(out, "Mean tokens", cell(report.mean_tokens_value, report.mean_tokens_boot.se));

  if (report.mode == EvalMode::Bilateral) {
    out << "\nTruth value distribution\n";
    const char* columns[] = {"tt", "tf", "ft", "ff", "other"};
    for (const char* code : columns) {
      out << code;
      for (std::size_t i = std::string(code).size(); i < 20; ++i) {
        out << ' ';
      }
    }
    out << '\n';
    for (const char* code : columns) {
      const double fraction = report.collapsed.at(code);
      const auto boot = report.collapsed_boot.at(code);
      std::string text = cell(fraction, boot.se);
      out << text;
      for (std::size_t i = text.size(); i < 20; ++i) {
        out << ' ';
      }
    }
    out << '\n';
  }
  return out.str();
}

json report_to_json(const MetricsReport& report) {
  json j{{"mode", to_string(report.mode)},
         {"records", report.record_count},
         {"coverage", report.coverage_value},
         {"coverage_se", report.coverage_boot.se},
         {"mean_time", report.mean_time},
         {"mean_time_se", report.mean_time_boot.se},
         {"mean_tokens", report.mean_tokens_value},
         {"mean_tokens_se", report.mean_tokens_boot.se},
         {"bootstrap",
          json{{"resamples", report.n_resamples},
               {"subsample_size", report.subsample_size},
               {"seed", report.seed},
               {"macro_f1_skipped", report.macro_f1_boot.skipped}}}};
  if (report.macro_f1) {
    j["macro_f1"] = *report.macro_f1;
    j["macro_f1_se"] = report.macro_f1_boot.se;
  } else {
    j["macro_f1"] = nullptr;
    j["macro_f1_note"] = report.macro_f1_note;
  }
  if (!report.tv_distribution.empty()) {
    j["tv_distribution"] = report.tv_distribution;
    json collapsed;
    for (const auto& [code, fraction] : report.collapsed) {
      collapsed[code] = json{{"fraction", fraction}, {"se", report.collapsed_boot.at(code).se}};
    }
    j["tv_distribution_collapsed"] = collapsed;
  }
  return j;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& file) {
  json j{{"command", manifest.command},
         {"config_fingerprint", manifest.config_fingerprint},
         {"seed", manifest.seed},
         {"inputs", manifest.inputs},
         {"outputs", manifest.outputs},
         {"started_at", manifest.started_at},
         {"finished_at", manifest.finished_at},
         {"version", manifest.version},
         {"settings", manifest.settings}};
  std::ofstream out(file);
  if (!out) {
    throw CacheIoError("cannot write manifest: " + file.string());
  }
  out << j.dump(2) << '\n';
}

}  // namespace bilateral
