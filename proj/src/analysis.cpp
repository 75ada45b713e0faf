#include "nereval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nereval/error.hpp"

namespace nereval {

std::optional<double> PerformanceTensor::f1(std::size_t i, std::size_t j, std::size_t k) const {
  const auto& cell = cells.at(i).at(j).at(k);
  if (!cell) return std::nullopt;
  return cell->f1;
}

std::vector<std::optional<double>> PerformanceTensor::row(std::size_t i, std::size_t j) const {
  std::vector<std::optional<double>> out;
  for (std::size_t k = 0; k < cells.at(i).at(j).size(); ++k) out.push_back(f1(i, j, k));
  return out;
}

std::size_t PerformanceTensor::attribute_index(AttributeId attr) const {
  auto it = std::find(attributes.begin(), attributes.end(), attr);
  if (it == attributes.end()) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("attribute ") + to_string(attr) + " not in tensor");
  }
  return static_cast<std::size_t>(it - attributes.begin());
}

std::size_t PerformanceTensor::system_index(std::string_view name) const {
  auto it = std::find(systems.begin(), systems.end(), name);
  if (it == systems.end()) {
    throw Error(ErrorKind::kUnknownSystem, "unknown system '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - systems.begin());
}

std::size_t TensorOptions::buckets_for(AttributeId attr) const {
  auto it = buckets.find(attr);
  return it == buckets.end() ? default_buckets : it->second;
}

std::vector<BucketPlan> fit_plans(const AttributeContext& ctx, std::span<const Span> gold,
                                  const TensorOptions& options) {
  std::vector<BucketPlan> plans;
  for (auto attr : options.attributes) {
    auto fixed = options.fixed_plans.find(attr);
    if (fixed != options.fixed_plans.end()) {
      plans.push_back(fixed->second);
    } else {
      plans.push_back(fit_span_plan(gold, attr, ctx, options.buckets_for(attr)));
    }
  }
  return plans;
}

PerformanceTensor build_tensor(const AttributeContext& ctx, const TensorOptions& options) {
  const Corpus& corpus = ctx.corpus();
  if (options.attributes.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no attributes selected");
  }
  const auto gold = extract_spans(corpus, SpanSource::gold());
  if (gold.empty()) throw Error(ErrorKind::kInvalidArgument, "test set has no gold entities");

  PerformanceTensor t;
  t.systems = corpus.systems;
  t.attributes = options.attributes;
  t.plans = fit_plans(ctx, gold, options);

  std::vector<std::vector<double>> gold_values;
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    gold_values.push_back(ctx.span_values(gold, t.attributes[j]));
    auto part = partition_values(t.plans[j], gold_values.back());
    std::vector<std::size_t> sizes;
    for (const auto& members : part.members) sizes.push_back(members.size());
    t.population.push_back(std::move(sizes));
  }

  for (const auto& system : corpus.systems) {
    const auto pred = extract_spans(corpus, SpanSource::of(system));
    t.overall.push_back(micro_f1(gold, pred));
    std::vector<std::vector<std::optional<PRF>>> per_attribute;
    for (std::size_t j = 0; j < t.attributes.size(); ++j) {
      SpanPartition part;
      part.plan = t.plans[j];
      part.gold = partition_values(t.plans[j], gold_values[j]).members;
      part.predicted =
          partition_values(t.plans[j], ctx.span_values(pred, t.attributes[j])).members;
      per_attribute.push_back(bucket_prf(part, gold, pred));
    }
    t.cells.push_back(std::move(per_attribute));
  }
  return t;
}

namespace {

nlohmann::json prf_to_json(const PRF& p) {
  return {{"tp", p.true_positives}, {"predicted", p.predicted}, {"gold", p.gold},
          {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

PRF prf_from_json(const nlohmann::json& j) {
  PRF p;
  p.true_positives = j.at("tp").get<std::size_t>();
  p.predicted = j.at("predicted").get<std::size_t>();
  p.gold = j.at("gold").get<std::size_t>();
  p.precision = j.at("precision").get<double>();
  p.recall = j.at("recall").get<double>();
  p.f1 = j.at("f1").get<double>();
  return p;
}

}  // namespace

nlohmann::json to_json(const PerformanceTensor& t) {
  auto plans = nlohmann::json::array();
  for (const auto& plan : t.plans) plans.push_back(to_json(plan));
  auto attributes = nlohmann::json::array();
  for (auto a : t.attributes) attributes.push_back(to_string(a));
  auto overall = nlohmann::json::array();
  for (const auto& p : t.overall) overall.push_back(prf_to_json(p));
  auto cells = nlohmann::json::array();
  for (const auto& sys : t.cells) {
    auto per_attr = nlohmann::json::array();
    for (const auto& row : sys) {
      auto buckets = nlohmann::json::array();
      for (const auto& cell : row) buckets.push_back(cell ? prf_to_json(*cell) : nlohmann::json());
      per_attr.push_back(std::move(buckets));
    }
    cells.push_back(std::move(per_attr));
  }
  return {{"format", "nereval.tensor"}, {"version", 1},          {"systems", t.systems},
          {"attributes", attributes},   {"plans", plans},        {"population", t.population},
          {"overall", overall},         {"cells", cells}};
}

PerformanceTensor tensor_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "nereval.tensor" || doc.at("version") != 1) {
      throw Error(ErrorKind::kFormat, "not a version-1 tensor document");
    }
    PerformanceTensor t;
    t.systems = doc.at("systems").get<std::vector<std::string>>();
    for (const auto& a : doc.at("attributes")) t.attributes.push_back(parse_attribute(a.get<std::string>()));
    for (const auto& p : doc.at("plans")) t.plans.push_back(bucket_plan_from_json(p));
    t.population = doc.at("population").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& p : doc.at("overall")) t.overall.push_back(prf_from_json(p));
    for (const auto& sys : doc.at("cells")) {
      std::vector<std::vector<std::optional<PRF>>> per_attr;
      for (const auto& row : sys) {
        std::vector<std::optional<PRF>> buckets;
        for (const auto& cell : row) {
          buckets.push_back(cell.is_null() ? std::nullopt : std::optional<PRF>(prf_from_json(cell)));
        }
        per_attr.push_back(std::move(buckets));
      }
      t.cells.push_back(std::move(per_attr));
    }
    if (t.plans.size() != t.attributes.size() || t.cells.size() != t.systems.size() ||
        t.overall.size() != t.systems.size()) {
      throw Error(ErrorKind::kFormat, "tensor document has inconsistent shape");
    }
    for (const auto& sys : t.cells) {
      if (sys.size() != t.attributes.size()) throw Error(ErrorKind::kFormat, "ragged tensor");
      for (std::size_t j = 0; j < sys.size(); ++j) {
        if (sys[j].size() != t.plans[j].size()) throw Error(ErrorKind::kFormat, "ragged tensor");
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("tensor: ") + e.what());
  }
}

ModelWise model_wise(std::span<const std::optional<double>> row) {
  std::vector<double> values;
  std::vector<double> ranks;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!row[k]) continue;
    values.push_back(*row[k]);
    ranks.push_back(static_cast<double>(k + 1));
  }
  ModelWise out;
  if (values.size() >= 3) out.spearman = stats::spearman_rho(values, ranks);
  if (values.size() >= 2) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.std_dev = std::sqrt(ss / static_cast<double>(values.size()));
  }
  return out;
}

ModelWise model_wise(const PerformanceTensor& t, std::size_t system, std::size_t attribute) {
  auto row = t.row(system, attribute);
  return model_wise(row);
}

std::string system_group(std::string_view system) {
  return std::string(system.substr(0, system.find('#')));
}

std::optional<stats::TestResult> bucket_friedman(const PerformanceTensor& t, std::size_t attribute,
                                                 std::span<const std::size_t> blocks) {
  if (blocks.size() < 2) return std::nullopt;
  const std::size_t buckets = t.plans.at(attribute).size();
  std::vector<std::size_t> common;
  for (std::size_t k = 0; k < buckets; ++k) {
    bool everywhere = true;
    for (auto i : blocks) everywhere = everywhere && t.f1(i, attribute, k).has_value();
    if (everywhere) common.push_back(k);
  }
  if (common.size() < 3) return std::nullopt;
  std::vector<std::vector<double>> scores;
  for (auto i : blocks) {
    std::vector<double> block;
    for (auto k : common) block.push_back(*t.f1(i, attribute, k));
    scores.push_back(std::move(block));
  }
  return stats::friedman_test(scores);
}

const char* to_string(SignificanceScope scope) {
  switch (scope) {
    case SignificanceScope::kModel: return "model";
    case SignificanceScope::kDataset: return "dataset";
    case SignificanceScope::kNone: return "none";
  }
  return "none";
}

std::vector<ModelWiseRow> model_wise_table(const PerformanceTensor& t, double alpha) {
  std::vector<std::size_t> everyone(t.systems.size());
  std::iota(everyone.begin(), everyone.end(), 0);

  std::vector<ModelWiseRow> rows;
  for (std::size_t i = 0; i < t.systems.size(); ++i) {
    std::vector<std::size_t> restarts;
    const auto group = system_group(t.systems[i]);
    for (std::size_t r = 0; r < t.systems.size(); ++r) {
      if (system_group(t.systems[r]) == group) restarts.push_back(r);
    }
    const bool by_model = restarts.size() >= 2;
    for (std::size_t j = 0; j < t.attributes.size(); ++j) {
      ModelWiseRow row;
      row.system = t.systems[i];
      row.attribute = t.attributes[j];
      row.measures = model_wise(t, i, j);
      auto test = bucket_friedman(t, j, by_model ? restarts : everyone);
      if (test) {
        row.p_value = test->p_value;
        row.significant = test->p_value < alpha;
        row.scope = by_model ? SignificanceScope::kModel : SignificanceScope::kDataset;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double attribute_zeta(const AttributeContext& ctx, std::span<const Span> gold, AttributeId attr) {
  if (gold.empty()) throw Error(ErrorKind::kInvalidArgument, "zeta over an empty span set");
  double sum = 0.0;
  for (const auto& span : gold) sum += ctx.span_value(span, attr);
  return sum / static_cast<double>(gold.size());
}

double attribute_zeta_tokens(const AttributeContext& ctx, AttributeId attr) {
  const auto refs = ctx.all_tokens();
  double sum = 0.0;
  for (auto ref : refs) sum += ctx.token_value(ref, attr);
  return sum / static_cast<double>(refs.size());
}

std::vector<std::vector<double>> normalize_zeta(const std::vector<std::vector<double>>& zeta) {
  if (zeta.empty()) return {};
  const std::size_t cols = zeta.front().size();
  std::vector<double> max(cols, 0.0);
  for (const auto& row : zeta) {
    if (row.size() != cols) throw Error(ErrorKind::kInvalidArgument, "ragged zeta table");
    for (std::size_t j = 0; j < cols; ++j) max[j] = std::max(max[j], row[j]);
  }
  auto out = zeta;
  for (auto& row : out) {
    for (std::size_t j = 0; j < cols; ++j) row[j] = max[j] > 0.0 ? row[j] / max[j] : 0.0;
  }
  return out;
}

std::optional<double> attribute_rho(const PerformanceTensor& t, std::size_t attribute) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.systems.size(); ++i) {
    if (auto rho = model_wise(t, i, attribute).spearman) {
      sum += std::abs(*rho);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<std::optional<double>> mean_correlations(
    const std::vector<std::vector<std::optional<double>>>& per_dataset) {
  if (per_dataset.empty()) return {};
  const std::size_t cols = per_dataset.front().size();
  std::vector<std::optional<double>> out(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : per_dataset) {
      if (row.size() != cols) throw Error(ErrorKind::kInvalidArgument, "ragged correlation table");
      if (row[j]) {
        sum += *row[j];
        ++n;
      }
    }
    if (n > 0) out[j] = sum / static_cast<double>(n);
  }
  return out;
}

namespace {

std::optional<DiagnosisEntry> diagnose_row(const std::vector<std::optional<double>>& values,
                                           AttributeId attr, const BucketPlan& plan) {
  std::optional<DiagnosisEntry> entry;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!values[k]) continue;
    const double v = *values[k];
    if (!entry) {
      entry = DiagnosisEntry{attr, k, k, "", "", v, v, false, false};
      continue;
    }
    if (v > entry->high_value) {
      entry->high_bucket = k;
      entry->high_value = v;
      entry->high_tied = false;
    } else if (v == entry->high_value) {
      entry->high_tied = true;
    }
    if (v < entry->low_value) {
      entry->low_bucket = k;
      entry->low_value = v;
      entry->low_tied = false;
    } else if (v == entry->low_value) {
      entry->low_tied = true;
    }
  }
  if (entry) {
    entry->high_label = plan.labels.at(entry->high_bucket);
    entry->low_label = plan.labels.at(entry->low_bucket);
  }
  return entry;
}

}  // namespace

std::vector<DiagnosisEntry> self_diagnose(const PerformanceTensor& t, std::size_t system) {
  std::vector<DiagnosisEntry> out;
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    if (auto e = diagnose_row(t.row(system, j), t.attributes[j], t.plans[j])) out.push_back(*e);
  }
  return out;
}

std::vector<DiagnosisEntry> comparative_diagnose(const PerformanceTensor& t, std::size_t a,
                                                 std::size_t b) {
  if (a >= t.systems.size() || b >= t.systems.size()) {
    throw Error(ErrorKind::kUnknownSystem, "system index out of range");
  }
  std::vector<DiagnosisEntry> out;
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    auto ra = t.row(a, j);
    auto rb = t.row(b, j);
    std::vector<std::optional<double>> gaps(ra.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
      if (ra[k] && rb[k]) gaps[k] = *ra[k] - *rb[k];
    }
    if (auto e = diagnose_row(gaps, t.attributes[j], t.plans[j])) out.push_back(*e);
  }
  return out;
}

std::vector<std::pair<double, double>> paired_sentence_scores(
    const SpanPartition& a, const SpanPartition& b, std::span<const Span> gold,
    std::span<const Span> pred_a, std::span<const Span> pred_b, std::size_t bucket) {
  struct Counts {
    std::size_t gold = 0, tp_gold_a = 0, tp_gold_b = 0;
    std::size_t pred_a = 0, tp_pred_a = 0, pred_b = 0, tp_pred_b = 0;
  };
  const auto gold_by_a = exact_matches(gold, pred_a);
  const auto gold_by_b = exact_matches(gold, pred_b);
  const auto a_hit = exact_matches(pred_a, gold);
  const auto b_hit = exact_matches(pred_b, gold);

  std::map<std::size_t, Counts> per_sentence;
  for (auto i : a.gold.at(bucket)) {
    auto& c = per_sentence[gold[i].sentence];
    ++c.gold;
    c.tp_gold_a += gold_by_a[i] ? 1 : 0;
    c.tp_gold_b += gold_by_b[i] ? 1 : 0;
  }
  for (auto i : a.predicted.at(bucket)) {
    auto& c = per_sentence[pred_a[i].sentence];
    ++c.pred_a;
    c.tp_pred_a += a_hit[i] ? 1 : 0;
  }
  for (auto i : b.predicted.at(bucket)) {
    auto& c = per_sentence[pred_b[i].sentence];
    ++c.pred_b;
    c.tp_pred_b += b_hit[i] ? 1 : 0;
  }

  // A system that predicts nothing where there is nothing to find is exact.
  auto score = [](std::size_t tp_gold, std::size_t tp_pred, std::size_t pred, std::size_t gold) {
    if (pred == 0 && gold == 0) return 1.0;
    return PRF::from_counts(tp_gold, tp_pred, pred, gold).f1;
  };
  std::vector<std::pair<double, double>> pairs;
  for (const auto& [sentence, c] : per_sentence) {
    pairs.emplace_back(score(c.tp_gold_a, c.tp_pred_a, c.pred_a, c.gold),
                       score(c.tp_gold_b, c.tp_pred_b, c.pred_b, c.gold));
  }
  return pairs;
}

}  // namespace nereval
