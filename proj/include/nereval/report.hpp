#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nereval/analysis.hpp"

namespace nereval {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct InputDigest {
  std::string role;  // "train", "test", "pred:<system>"
  std::string name;  // file name without directories
  std::string digest;

  friend bool operator==(const InputDigest&, const InputDigest&) = default;
};

struct AttributeWiseRow {
  AttributeId attribute = AttributeId::kELen;
  double zeta = 0.0;
  double zeta_normalized = 0.0;
  std::optional<double> zeta_tokens;
  std::optional<double> rho;
  std::optional<stats::TestResult> friedman;  // blocks = all systems
  bool significant = false;
};

struct BucketTest {
  std::size_t bucket = 0;
  stats::TestResult wilcoxon;
  bool significant = false;
};

struct Comparison {
  std::string system_a;
  std::string system_b;
  std::vector<DiagnosisEntry> entries;
  // Per entry: Wilcoxon on paired per-sentence F1 in the max- and min-gap buckets.
  std::vector<BucketTest> high_tests;
  std::vector<BucketTest> low_tests;
};

struct ReportBundle {
  std::string tool_version = kToolVersion;
  std::vector<InputDigest> inputs;
  std::map<std::string, std::string> config;
  double alpha = 0.05;

  PerformanceTensor tensor;
  std::vector<ModelWiseRow> model_wise;
  std::vector<AttributeWiseRow> attribute_wise;
  std::vector<std::vector<DiagnosisEntry>> self_diagnosis;  // [system]
  std::vector<Comparison> comparisons;
};

// Several reports over the same systems, one per dataset: correlations are
// averaged per dataset and zeta is normalized by the column maximum.
struct CrossDataset {
  std::vector<std::string> datasets;
  std::vector<std::string> systems;     // present in every report, first report's order
  std::vector<AttributeId> attributes;  // likewise
  std::vector<std::vector<std::optional<double>>> mean_spearman;  // [system][attribute]
  std::vector<std::vector<double>> zeta;                           // [dataset][attribute]
  std::vector<std::vector<double>> zeta_normalized;                // [dataset][attribute]
};

CrossDataset aggregate_reports(const std::vector<std::pair<std::string, ReportBundle>>& reports);
std::string render_cross_dataset(const CrossDataset& summary);
nlohmann::json to_json(const CrossDataset& summary);

// FNV-1a 64-bit, hex encoded.
std::string digest_bytes(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

// Rounds every floating-point number in the document to six significant digits.
nlohmann::json round_numbers(nlohmann::json doc);

nlohmann::json to_json(const ReportBundle& bundle);
ReportBundle report_from_json(const nlohmann::json& doc);

std::string render_json(const ReportBundle& bundle);
std::string render_markdown(const ReportBundle& bundle);

enum class ChartKind { kRadar, kHeatmap, kDiagnosisBars };
const char* to_string(ChartKind kind);
std::string render_chart_data(const ReportBundle& bundle, ChartKind kind);

void emit_json(const ReportBundle& bundle, const std::filesystem::path& path);
void emit_markdown(const ReportBundle& bundle, const std::filesystem::path& path);
void emit_chart_data(const ReportBundle& bundle, ChartKind kind, const std::filesystem::path& path);

// Writes `text` to `path`, creating parent directories; Error(kIo) names the path.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace nereval
