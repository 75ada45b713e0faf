#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nereval/attributes.hpp"

namespace nereval {

enum class BucketStrategy {
  kIsolateBothEnds,  // eCon, tCon: {0} first, {1} last, equal population between
  kIsolateZero,      // eFre, tFre, oDen: {0} first, equal population above
  kEqualPopulation,  // sLen, eDen
  kFixedLengths,     // eLen: {1}, {2}, {3}, {>=4}
};

const char* to_string(BucketStrategy strategy);
BucketStrategy strategy_for(AttributeId attr);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(double v) const;
  double distance(double v) const;
  // "[1, 2)", "{0}", "[4, inf)".
  std::string str() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct BucketPlan {
  AttributeId attribute = AttributeId::kELen;
  BucketStrategy strategy = BucketStrategy::kFixedLengths;
  std::vector<Interval> intervals;
  std::vector<std::string> labels;
  std::size_t requested = 0;  // m asked for
  // Set when the plan has fewer buckets than requested: too few distinct
  // values to fill them without leaving one empty.
  bool too_few_distinct = false;

  std::size_t size() const { return intervals.size(); }
  friend bool operator==(const BucketPlan&, const BucketPlan&) = default;
};

// XS/S/L/XL for four buckets, B1..Bn otherwise.
std::vector<std::string> bucket_labels(std::size_t count);

inline constexpr std::size_t kDefaultBuckets = 4;

// Chooses intervals for `values` with the attribute's strategy. Ties are never
// split: all items sharing a value fall in one bucket. Buckets that would
// isolate a value absent from `values` are omitted.
BucketPlan plan_buckets(AttributeId attr, std::span<const double> values,
                        std::size_t m = kDefaultBuckets);

struct Assignment {
  std::size_t bucket = 0;
  bool clamped = false;  // value outside every interval, moved to the nearest one
};

Assignment assign(double value, const BucketPlan& plan);

using BucketMembers = std::vector<std::vector<std::size_t>>;

struct Partition {
  BucketPlan plan;
  BucketMembers members;  // per bucket, indices into the partitioned item list
  std::size_t clamped = 0;

  std::size_t item_count() const;
};

Partition partition_values(const BucketPlan& plan, std::span<const double> values);

// Gold and one system's predicted spans bucketed on a single axis.
struct SpanPartition {
  BucketPlan plan;
  BucketMembers gold;
  BucketMembers predicted;
  std::size_t clamped = 0;
};

// Plans on the gold-side values (unless `fixed` is given) and assigns both
// gold and predicted spans under that plan.
SpanPartition bucket_test_set(std::span<const Span> gold, std::span<const Span> predicted,
                              AttributeId attr, const AttributeContext& ctx,
                              std::size_t m = kDefaultBuckets,
                              const BucketPlan* fixed = nullptr);

BucketPlan fit_span_plan(std::span<const Span> gold, AttributeId attr, const AttributeContext& ctx,
                         std::size_t m = kDefaultBuckets);

// Token-level bucketing over every test token; token-native and sentence
// attributes only.
Partition bucket_tokens(const AttributeContext& ctx, AttributeId attr,
                        std::size_t m = kDefaultBuckets, const BucketPlan* fixed = nullptr);

nlohmann::json to_json(const BucketPlan& plan);
BucketPlan bucket_plan_from_json(const nlohmann::json& doc);

}  // namespace nereval
