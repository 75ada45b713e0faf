#include "nereval/bucketing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nereval/error.hpp"

namespace nereval {

const char* to_string(BucketStrategy strategy) {
  switch (strategy) {
    case BucketStrategy::kIsolateBothEnds: return "isolate-both-ends";
    case BucketStrategy::kIsolateZero: return "isolate-zero";
    case BucketStrategy::kEqualPopulation: return "equal-population";
    case BucketStrategy::kFixedLengths: return "fixed-lengths";
  }
  return "?";
}

namespace {

BucketStrategy parse_strategy(std::string_view name) {
  for (auto s : {BucketStrategy::kIsolateBothEnds, BucketStrategy::kIsolateZero,
                 BucketStrategy::kEqualPopulation, BucketStrategy::kFixedLengths}) {
    if (name == to_string(s)) return s;
  }
  throw Error(ErrorKind::kFormat, "unknown bucket strategy '" + std::string(name) + "'");
}

}  // namespace

BucketStrategy strategy_for(AttributeId attr) {
  switch (attr) {
    case AttributeId::kECon:
    case AttributeId::kTCon: return BucketStrategy::kIsolateBothEnds;
    case AttributeId::kEFre:
    case AttributeId::kTFre:
    case AttributeId::kODen: return BucketStrategy::kIsolateZero;
    case AttributeId::kSLen:
    case AttributeId::kEDen: return BucketStrategy::kEqualPopulation;
    case AttributeId::kELen: return BucketStrategy::kFixedLengths;
  }
  return BucketStrategy::kEqualPopulation;
}

bool Interval::contains(double v) const {
  const bool above = lo_closed ? v >= lo : v > lo;
  const bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

double Interval::distance(double v) const {
  if (contains(v)) return 0.0;
  return v <= lo ? lo - v : v - hi;
}

std::string Interval::str() const {
  if (lo == hi) return fmt::format("{{{:.4g}}}", lo);
  std::string hi_text = std::isinf(hi) ? "inf" : fmt::format("{:.4g}", hi);
  const char close = hi_closed && !std::isinf(hi) ? ']' : ')';
  return fmt::format("{}{:.4g}, {}{}", lo_closed ? '[' : '(', lo, hi_text, close);
}

std::vector<std::string> bucket_labels(std::size_t count) {
  if (count == 4) return {"XS", "S", "L", "XL"};
  std::vector<std::string> labels;
  for (std::size_t i = 1; i <= count; ++i) labels.push_back("B" + std::to_string(i));
  return labels;
}

namespace {

// Returns the first value of each bucket when the sorted values are split
// into `q` groups of near-equal population with cuts only between distinct
// values. Fewer groups come back when there are fewer distinct values.
std::vector<double> equal_population_starts(std::span<const double> sorted, std::size_t q,
                                            bool& reduced) {
  std::vector<double> distinct;
  std::vector<std::size_t> cumulative;  // cumulative[g] = items strictly below distinct[g]
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (distinct.empty() || sorted[i] != distinct.back()) {
      distinct.push_back(sorted[i]);
      cumulative.push_back(i);
    }
  }
  const std::size_t d = distinct.size();
  if (d <= q) {
    reduced = reduced || d < q;
    return distinct;
  }
  const double n = static_cast<double>(sorted.size());
  std::vector<double> starts{distinct.front()};
  std::size_t prev = 0;
  for (std::size_t k = 1; k < q; ++k) {
    const double target = static_cast<double>(k) * n / static_cast<double>(q);
    const std::size_t lo = prev + 1;
    const std::size_t hi = d - (q - k);
    std::size_t best = lo;
    for (std::size_t g = lo; g <= hi; ++g) {
      if (std::abs(static_cast<double>(cumulative[g]) - target) <
          std::abs(static_cast<double>(cumulative[best]) - target)) {
        best = g;
      }
    }
    starts.push_back(distinct[best]);
    prev = best;
  }
  return starts;
}

void append_segment(BucketPlan& plan, std::span<const double> sorted, std::size_t q, double lo,
                    bool lo_closed, double hi, bool hi_closed) {
  if (sorted.empty() || q == 0) return;
  auto starts = equal_population_starts(sorted, q, plan.too_few_distinct);
  for (std::size_t b = 0; b < starts.size(); ++b) {
    const bool first = b == 0;
    const bool last = b + 1 == starts.size();
    plan.intervals.push_back(Interval{first ? lo : starts[b], last ? hi : starts[b + 1],
                                      first ? lo_closed : true, last ? hi_closed : false});
  }
}

}  // namespace

BucketPlan plan_buckets(AttributeId attr, std::span<const double> values, std::size_t m) {
  if (values.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("no values to bucket for ") + to_string(attr));
  }
  if (m < 2) throw Error(ErrorKind::kInvalidArgument, "bucket count must be at least 2");

  BucketPlan plan;
  plan.attribute = attr;
  plan.strategy = strategy_for(attr);
  plan.requested = m;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  switch (plan.strategy) {
    case BucketStrategy::kFixedLengths: {
      constexpr double inf = std::numeric_limits<double>::infinity();
      plan.requested = 4;
      plan.intervals = {{1, 2, true, false}, {2, 3, true, false}, {3, 4, true, false},
                        {4, inf, true, true}};
      break;
    }
    case BucketStrategy::kIsolateBothEnds: {
      auto zero_end = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
      auto one_begin = std::lower_bound(sorted.begin(), sorted.end(), 1.0);
      const bool has_zero = zero_end != sorted.begin();
      const bool has_one = one_begin != sorted.end();
      std::span<const double> middle(zero_end, one_begin);
      if (has_zero) plan.intervals.push_back({0, 0, true, true});
      if (m == 2) {
        // Room for the zero bucket only; the remainder shares the last one.
        append_segment(plan, std::span<const double>(zero_end, sorted.end()), 1, 0, !has_zero,
                       1, true);
        break;
      }
      append_segment(plan, middle, m - 2, 0, !has_zero, 1, !has_one);
      if (has_one) plan.intervals.push_back({1, 1, true, true});
      break;
    }
    case BucketStrategy::kIsolateZero: {
      auto zero_end = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
      const bool has_zero = zero_end != sorted.begin();
      if (has_zero) plan.intervals.push_back({0, 0, true, true});
      append_segment(plan, std::span<const double>(zero_end, sorted.end()), m - 1, 0, !has_zero,
                     std::max(1.0, sorted.back()), true);
      break;
    }
    case BucketStrategy::kEqualPopulation:
      append_segment(plan, sorted, m, sorted.front(), true, sorted.back(), true);
      break;
  }
  if (plan.intervals.size() < plan.requested) plan.too_few_distinct = true;
  plan.labels = bucket_labels(plan.intervals.size());
  return plan;
}

Assignment assign(double value, const BucketPlan& plan) {
  if (plan.intervals.empty()) throw Error(ErrorKind::kInvalidArgument, "empty bucket plan");
  for (std::size_t i = 0; i < plan.intervals.size(); ++i) {
    if (plan.intervals[i].contains(value)) return {i, false};
  }
  const std::size_t last = plan.intervals.size() - 1;
  if (value < plan.intervals.front().lo) return {0, true};
  if (value > plan.intervals[last].hi) return {last, true};
  // Inside a gap between intervals: nearest one, lower on ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < plan.intervals.size(); ++i) {
    if (plan.intervals[i].distance(value) < plan.intervals[best].distance(value)) best = i;
  }
  return {best, true};
}

std::size_t Partition::item_count() const {
  std::size_t n = 0;
  for (const auto& bucket : members) n += bucket.size();
  return n;
}

Partition partition_values(const BucketPlan& plan, std::span<const double> values) {
  Partition part;
  part.plan = plan;
  part.members.resize(plan.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto a = assign(values[i], plan);
    part.members[a.bucket].push_back(i);
    if (a.clamped) ++part.clamped;
  }
  return part;
}

BucketPlan fit_span_plan(std::span<const Span> gold, AttributeId attr, const AttributeContext& ctx,
                         std::size_t m) {
  auto values = ctx.span_values(gold, attr);
  return plan_buckets(attr, values, m);
}

SpanPartition bucket_test_set(std::span<const Span> gold, std::span<const Span> predicted,
                              AttributeId attr, const AttributeContext& ctx, std::size_t m,
                              const BucketPlan* fixed) {
  auto gold_values = ctx.span_values(gold, attr);
  SpanPartition out;
  out.plan = fixed ? *fixed : plan_buckets(attr, gold_values, m);
  auto gold_part = partition_values(out.plan, gold_values);
  auto pred_part = partition_values(out.plan, ctx.span_values(predicted, attr));
  out.gold = std::move(gold_part.members);
  out.predicted = std::move(pred_part.members);
  out.clamped = gold_part.clamped + pred_part.clamped;
  return out;
}

Partition bucket_tokens(const AttributeContext& ctx, AttributeId attr, std::size_t m,
                        const BucketPlan* fixed) {
  auto refs = ctx.all_tokens();
  std::vector<double> values;
  values.reserve(refs.size());
  for (auto ref : refs) values.push_back(ctx.token_value(ref, attr));
  return partition_values(fixed ? *fixed : plan_buckets(attr, values, m), values);
}

namespace {

nlohmann::json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

double bound_from_json(const nlohmann::json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

}  // namespace

nlohmann::json to_json(const BucketPlan& plan) {
  auto intervals = nlohmann::json::array();
  for (const auto& iv : plan.intervals) {
    intervals.push_back({{"lo", bound_to_json(iv.lo)},
                         {"hi", bound_to_json(iv.hi)},
                         {"lo_closed", iv.lo_closed},
                         {"hi_closed", iv.hi_closed}});
  }
  return {{"attribute", to_string(plan.attribute)},
          {"strategy", to_string(plan.strategy)},
          {"requested", plan.requested},
          {"too_few_distinct", plan.too_few_distinct},
          {"labels", plan.labels},
          {"intervals", intervals}};
}

BucketPlan bucket_plan_from_json(const nlohmann::json& doc) {
  try {
    BucketPlan plan;
    plan.attribute = parse_attribute(doc.at("attribute").get<std::string>());
    plan.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    plan.requested = doc.at("requested").get<std::size_t>();
    plan.too_few_distinct = doc.at("too_few_distinct").get<bool>();
    plan.labels = doc.at("labels").get<std::vector<std::string>>();
    for (const auto& iv : doc.at("intervals")) {
      plan.intervals.push_back(Interval{bound_from_json(iv.at("lo")), bound_from_json(iv.at("hi")),
                                        iv.at("lo_closed").get<bool>(),
                                        iv.at("hi_closed").get<bool>()});
    }
    if (plan.labels.size() != plan.intervals.size() || plan.intervals.empty()) {
      throw Error(ErrorKind::kFormat, "bucket plan labels do not match intervals");
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("bucket plan: ") + e.what());
  }
}

}  // namespace nereval
