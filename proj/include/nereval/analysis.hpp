#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nereval/attributes.hpp"
#include "nereval/bucketing.hpp"
#include "nereval/metrics.hpp"
#include "nereval/stats.hpp"

namespace nereval {

// F1 of system i on bucket k of attribute j, ragged over k. Absent cells are
// buckets holding neither gold nor predicted spans.
struct PerformanceTensor {
  std::vector<std::string> systems;
  std::vector<AttributeId> attributes;
  std::vector<BucketPlan> plans;                        // [j]
  std::vector<std::vector<std::size_t>> population;     // [j][k] gold spans per bucket
  std::vector<std::vector<std::vector<std::optional<PRF>>>> cells;  // [i][j][k]
  std::vector<PRF> overall;                             // [i]

  std::optional<double> f1(std::size_t i, std::size_t j, std::size_t k) const;
  std::vector<std::optional<double>> row(std::size_t i, std::size_t j) const;
  std::size_t attribute_index(AttributeId attr) const;
  std::size_t system_index(std::string_view name) const;
};

struct TensorOptions {
  std::vector<AttributeId> attributes{kAllAttributes.begin(), kAllAttributes.end()};
  std::size_t default_buckets = kDefaultBuckets;
  std::map<AttributeId, std::size_t> buckets;  // per-attribute override of m
  std::map<AttributeId, BucketPlan> fixed_plans;

  std::size_t buckets_for(AttributeId attr) const;
};

std::vector<BucketPlan> fit_plans(const AttributeContext& ctx, std::span<const Span> gold,
                                  const TensorOptions& options);

PerformanceTensor build_tensor(const AttributeContext& ctx, const TensorOptions& options = {});

nlohmann::json to_json(const PerformanceTensor& tensor);
PerformanceTensor tensor_from_json(const nlohmann::json& doc);

struct ModelWise {
  std::optional<double> spearman;  // needs >= 3 present buckets and rank variance
  std::optional<double> std_dev;   // population std, needs >= 2 present buckets
};

// Correlates bucket F1s with bucket ranks 1..K (lowest interval first);
// absent buckets are dropped pairwise.
ModelWise model_wise(std::span<const std::optional<double>> row);
ModelWise model_wise(const PerformanceTensor& t, std::size_t system, std::size_t attribute);

// Prediction sets named "model#run" are restarts of "model".
std::string system_group(std::string_view system);

// Friedman over blocks = the given systems, treatments = buckets present for
// every block. std::nullopt when fewer than 2 blocks or 3 common buckets.
std::optional<stats::TestResult> bucket_friedman(const PerformanceTensor& t, std::size_t attribute,
                                                 std::span<const std::size_t> blocks);

enum class SignificanceScope { kModel, kDataset, kNone };
const char* to_string(SignificanceScope scope);

struct ModelWiseRow {
  std::string system;
  AttributeId attribute = AttributeId::kELen;
  ModelWise measures;
  std::optional<double> p_value;
  bool significant = false;
  SignificanceScope scope = SignificanceScope::kNone;
};

// Per (system, attribute). Significance uses the system's restarts as
// Friedman blocks when it has at least two, otherwise every system.
std::vector<ModelWiseRow> model_wise_table(const PerformanceTensor& t, double alpha);

// Mean of the attribute over gold test spans (token-native ones lifted).
double attribute_zeta(const AttributeContext& ctx, std::span<const Span> gold, AttributeId attr);
// Mean over test tokens; only for token-applicable attributes.
double attribute_zeta_tokens(const AttributeContext& ctx, AttributeId attr);

// zeta[d][j] / max_d zeta[d][j]; 0 when the column maximum is 0.
std::vector<std::vector<double>> normalize_zeta(const std::vector<std::vector<double>>& zeta);

// Mean |S^rho| over systems with a defined correlation.
std::optional<double> attribute_rho(const PerformanceTensor& t, std::size_t attribute);

// Element-wise mean of per-dataset correlations, skipping undefined ones.
std::vector<std::optional<double>> mean_correlations(
    const std::vector<std::vector<std::optional<double>>>& per_dataset);

struct DiagnosisEntry {
  AttributeId attribute = AttributeId::kELen;
  std::size_t high_bucket = 0;  // best bucket, or bucket of largest gap
  std::size_t low_bucket = 0;   // worst bucket, or bucket of smallest gap
  std::string high_label;
  std::string low_label;
  double high_value = 0.0;
  double low_value = 0.0;
  bool high_tied = false;
  bool low_tied = false;

  double gap() const { return high_value - low_value; }
};

// Ties resolve to the lower bucket index and set the tied flag.
std::vector<DiagnosisEntry> self_diagnose(const PerformanceTensor& t, std::size_t system);
// Signed gap T[a] - T[b]; buckets absent for either system are skipped.
std::vector<DiagnosisEntry> comparative_diagnose(const PerformanceTensor& t, std::size_t a,
                                                 std::size_t b);

// Per-sentence F1 of two systems restricted to one bucket, for sentences in
// which the bucket holds any gold or predicted span of either system.
std::vector<std::pair<double, double>> paired_sentence_scores(
    const SpanPartition& a, const SpanPartition& b, std::span<const Span> gold,
    std::span<const Span> pred_a, std::span<const Span> pred_b, std::size_t bucket);

}  // namespace nereval
