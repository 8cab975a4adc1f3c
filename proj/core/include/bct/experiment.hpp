#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bct/datasets.hpp"
#include "bct/oracle.hpp"
#include "bct/report.hpp"

namespace bct {

enum class Operation { build, query, approx, insert, remove, nngraph };

std::string_view to_string(Operation op);
Operation parse_operation(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::uniform_cube;
  std::size_t n = 64;
  std::size_t dim = 2;
  DatasetParams params;
  std::uint64_t seed = 1;
  // When set, points are loaded from this file instead of generated.
  std::optional<std::filesystem::path> input;
};

struct ExperimentSpec {
  DatasetSpec dataset;
  OracleConfig oracle;
  // Oracle used to build the shared tree for query, approx, insert and
  // remove experiments. Defaults to `oracle`.
  std::optional<OracleConfig> build_oracle;
  Operation operation = Operation::query;
  double delta = 0.1;
  std::optional<double> epsilon;
  std::optional<double> expansion_bound;
  bool lt_variant = false;
  std::uint64_t t_max = 1'000'000;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  // Query experiments only: run the same trials on nested prefixes of the
  // dataset of each size.
  std::vector<std::size_t> sweep_n;
  // Write per-trial NDJSON reports here and the summary next to it
  // (<stem>.summary.json).
  std::optional<std::filesystem::path> output;
  // Include wall-clock timings in the reports (breaks byte-identical reruns).
  bool timing = false;

  // Throws std::invalid_argument on malformed input.
  static ExperimentSpec from_json(std::string_view text);
  std::string to_json() const;
};

struct TrialReport {
  std::size_t trial = 0;
  std::size_t n = 0;
  RunReport run;
  // Whether the result matched the exact ground truth.
  bool correct = false;
  // Operation-specific result payload as a JSON object.
  std::string result_json;
};

struct ScalingRow {
  std::size_t n = 0;
  double mean_calls = 0.0;
  double median_calls = 0.0;
  double success_rate = 0.0;
};

struct ExperimentSummary {
  std::size_t trials = 0;
  double success_rate = 0.0;
  std::size_t capped = 0;
  double mean_calls = 0.0;
  double p10_calls = 0.0;
  double median_calls = 0.0;
  double p90_calls = 0.0;
  std::uint64_t max_calls = 0;
  std::vector<ScalingRow> scaling;
};

struct ExperimentResult {
  std::vector<TrialReport> reports;
  ExperimentSummary summary;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// One NDJSON line per report, schema-versioned.
std::string report_to_json(const TrialReport& report, const ExperimentSpec& spec);
std::string reports_to_ndjson(const std::vector<TrialReport>& reports, const ExperimentSpec& spec);
// Parses lines written by reports_to_ndjson.
std::vector<TrialReport> reports_from_ndjson(std::string_view text);

// Pure function of the reports.
ExperimentSummary summarize(const std::vector<TrialReport>& reports);
std::string summary_to_json(const ExperimentSummary& summary);

}  // namespace bct
