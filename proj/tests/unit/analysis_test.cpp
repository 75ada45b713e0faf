#include <doctest.h>

#include <cmath>
#include <random>

#include "nereval/analysis.hpp"
#include "nereval/error.hpp"
#include "support.hpp"

using namespace nereval;
using doctest::Approx;

namespace {

using Row = std::vector<std::optional<double>>;

// Tensor over one attribute with the given per-system rows.
PerformanceTensor tensor_of(const std::vector<Row>& rows, AttributeId attr = AttributeId::kECon) {
  PerformanceTensor t;
  t.attributes = {attr};
  BucketPlan plan;
  plan.attribute = attr;
  plan.intervals.resize(rows.front().size());
  plan.labels = bucket_labels(plan.intervals.size());
  t.plans = {plan};
  t.population = {std::vector<std::size_t>(plan.size(), 1)};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.systems.push_back("s" + std::to_string(i));
    std::vector<std::optional<PRF>> cells;
    for (const auto& v : rows[i]) {
      if (!v) {
        cells.emplace_back();
        continue;
      }
      PRF p;
      p.f1 = *v;
      cells.push_back(p);
    }
    t.cells.push_back({cells});
    t.overall.emplace_back();
  }
  return t;
}

Corpus planted_corpus() {
  // System "long" finds single-token entities and misses longer ones.
  std::vector<std::vector<std::string>> rows;
  for (int s = 0; s < 12; ++s) {
    const int len = 1 + s % 4;
    rows.push_back({"w" + std::to_string(s), "O", "O", "O"});
    for (int i = 0; i < len; ++i) {
      const std::string tag = (i == 0 ? "B-E" : "I-E");
      const std::string hit = len == 1 ? tag : (i == 0 ? "B-E" : "O");
      rows.push_back({"e" + std::to_string(i), tag, hit, tag});
    }
    rows.push_back({});
  }
  ColumnSpec spec;
  spec.prediction_columns = {{"long", 2}, {"oracle", 3}};
  return parse_conll(std::string_view(testing::conll(rows)), spec);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("model-wise measures") {
  Row up{0.5, 0.6, 0.8, 0.7};
  auto m = model_wise(up);
  CHECK(*m.spearman == Approx(0.8).epsilon(1e-12));
  CHECK(*m.std_dev == Approx(0.1118033988749895).epsilon(1e-12));
  CHECK(*model_wise(Row{0.1, 0.2, 0.3, 0.9}).spearman == Approx(1.0));
  CHECK(*model_wise(Row{0.9, 0.5, 0.3, 0.0}).spearman == Approx(-1.0));

  // Absent buckets are dropped; ranks keep their original positions.
  auto gap = model_wise(Row{0.2, std::nullopt, 0.4, 0.6});
  CHECK(*gap.spearman == Approx(1.0));
  auto two = model_wise(Row{0.2, std::nullopt, 0.4, std::nullopt});
  CHECK_FALSE(two.spearman);
  CHECK(*two.std_dev == Approx(0.1));
  CHECK_FALSE(model_wise(Row{0.5, 0.5, 0.5}).spearman);
}

TEST_CASE("spearman is rank based") {
  Row a{0.1, 0.4, 0.2, 0.9, 0.3};
  Row b;
  for (auto v : a) b.push_back(std::exp(3 * *v));
  CHECK(*model_wise(a).spearman == Approx(*model_wise(b).spearman).epsilon(1e-12));
}

TEST_CASE("attribute rho") {
  auto single = tensor_of({{0.1, 0.2, 0.3}});
  CHECK(*attribute_rho(single, 0) == Approx(1.0));
  auto opposite = tensor_of({{0.1, 0.2, 0.3}, {0.3, 0.2, 0.1}});
  CHECK(*attribute_rho(opposite, 0) == Approx(1.0));
  auto mixed = tensor_of({{0.1, 0.2, 0.3, 0.5, 0.4}, {0.5, 0.1, 0.4, 0.2, 0.3}});
  const double r0 = *model_wise(mixed, 0, 0).spearman;
  const double r1 = *model_wise(mixed, 1, 0).spearman;
  CHECK(*attribute_rho(mixed, 0) == Approx((std::abs(r0) + std::abs(r1)) / 2));
  CHECK_FALSE(attribute_rho(tensor_of({{0.5, 0.5, 0.5}}), 0));
}

TEST_CASE("mean correlations and zeta normalization") {
  auto mean = mean_correlations({{0.9, std::nullopt}, {-0.6, std::nullopt}, {0.3, 0.5}});
  CHECK(*mean[0] == Approx(0.2));
  CHECK(*mean[1] == Approx(0.5));
  auto norm = normalize_zeta({{2.0, 0.0, 0.5}, {4.0, 0.0, 0.25}});
  CHECK(norm[0] == std::vector<double>{0.5, 0.0, 1.0});
  CHECK(norm[1] == std::vector<double>{1.0, 0.0, 0.5});
}

TEST_CASE("self diagnosis") {
  auto t = tensor_of({{0.9, 0.7, 0.4, 0.1}, {0.5, 0.5, 0.5, 0.5}});
  auto down = self_diagnose(t, 0).at(0);
  CHECK(down.high_bucket == 0);
  CHECK(down.low_bucket == 3);
  CHECK(down.high_label == "XS");
  CHECK(down.low_label == "XL");
  CHECK(down.gap() == Approx(0.8));
  auto flat = self_diagnose(t, 1).at(0);
  CHECK(flat.gap() == 0.0);
  CHECK(flat.high_tied);
  CHECK(flat.low_tied);
  CHECK(flat.high_bucket == 0);

  // Shifting a row moves neither bucket nor gap.
  auto shifted = tensor_of({{1.0, 0.8, 0.5, 0.2}});
  auto s = self_diagnose(shifted, 0).at(0);
  CHECK(s.high_bucket == down.high_bucket);
  CHECK(s.low_bucket == down.low_bucket);
  CHECK(s.gap() == Approx(down.gap()));
}

TEST_CASE("comparative diagnosis") {
  auto t = tensor_of({{0.6, 0.3, 0.5, 0.9}, {0.5, 0.5, 0.5, 0.6}});
  auto e = comparative_diagnose(t, 0, 1).at(0);
  CHECK(e.high_bucket == 3);
  CHECK(e.low_bucket == 1);
  auto r = comparative_diagnose(t, 1, 0).at(0);
  CHECK(r.high_value == -e.low_value);
  CHECK(r.low_value == -e.high_value);
  auto self = comparative_diagnose(t, 0, 0).at(0);
  CHECK(self.high_value == 0.0);
  CHECK(self.low_value == 0.0);
  CHECK_THROWS_AS(comparative_diagnose(t, 0, 5), Error);

  auto holes = tensor_of({{0.6, std::nullopt, 0.5}, {0.5, 0.1, std::nullopt}});
  auto h = comparative_diagnose(holes, 0, 1).at(0);
  CHECK(h.high_bucket == 0);
  CHECK(h.low_bucket == 0);
}

TEST_CASE("friedman blocks and significance scope") {
  std::vector<Row> rows;
  for (int r = 0; r < 6; ++r) rows.push_back({0.9 - 0.01 * r, 0.6, 0.4, 0.1});
  auto t = tensor_of(rows);
  for (std::size_t i = 0; i < 3; ++i) t.systems[i] = "crf#" + std::to_string(i);
  for (std::size_t i = 3; i < 6; ++i) t.systems[i] = "lstm#" + std::to_string(i);
  CHECK(system_group("crf#2") == "crf");
  CHECK(system_group("plain") == "plain");

  auto table = model_wise_table(t, 0.05);
  REQUIRE(table.size() == 6);
  CHECK(table[0].scope == SignificanceScope::kModel);
  // Three blocks agreeing on four treatments: statistic 9, p ~ 0.029.
  CHECK(*table[0].p_value == Approx(stats::chi_square_sf(9, 3)));
  CHECK(table[0].significant);

  std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  auto everyone = bucket_friedman(t, 0, all);
  REQUIRE(everyone);
  CHECK(everyone->statistic == Approx(18.0));

  std::vector<std::size_t> one{0};
  CHECK_FALSE(bucket_friedman(t, 0, one));
  auto narrow = tensor_of({{0.1, 0.2}, {0.2, 0.3}});
  std::vector<std::size_t> both{0, 1};
  CHECK_FALSE(bucket_friedman(narrow, 0, both));
  auto untested = model_wise_table(narrow, 0.05);
  CHECK(untested[0].scope == SignificanceScope::kNone);
  CHECK_FALSE(untested[0].p_value);
}

TEST_CASE("tensor on a planted fixture") {
  auto corpus = planted_corpus();
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  TensorOptions opts;
  auto t = build_tensor(ctx, opts);
  CHECK(t.systems.size() == 2);
  CHECK(t.attributes.size() == 8);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 8; ++j) CHECK(t.cells[i][j].size() == t.plans[j].size());
  }
  const std::size_t elen = t.attribute_index(AttributeId::kELen);
  CHECK(t.plans[elen].size() == 4);
  const std::size_t sys = t.system_index("long");
  CHECK(*t.f1(sys, elen, 3) < *t.f1(sys, elen, 0));
  CHECK(*model_wise(t, sys, elen).spearman < -0.7);
  auto diag = self_diagnose(t, sys);
  CHECK(diag[elen].high_label == "XS");
  for (auto v : t.row(t.system_index("oracle"), elen)) CHECK(*v == 1.0);
  CHECK(t.population[elen] == std::vector<std::size_t>{3, 3, 3, 3});
}

TEST_CASE("one-bucket tensor equals overall F1") {
  auto corpus = planted_corpus();
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  TensorOptions opts;
  opts.attributes = {AttributeId::kSLen};
  BucketPlan one;
  one.attribute = AttributeId::kSLen;
  one.strategy = BucketStrategy::kEqualPopulation;
  one.intervals = {Interval{0, 1000, true, true}};
  one.labels = {"B1"};
  opts.fixed_plans[AttributeId::kSLen] = one;
  auto t = build_tensor(ctx, opts);
  CHECK(*t.f1(0, 0, 0) == t.overall[0].f1);
}

TEST_CASE("tensor JSON round trip") {
  auto corpus = planted_corpus();
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  auto t = build_tensor(ctx);
  auto back = tensor_from_json(nlohmann::json::parse(to_json(t).dump()));
  CHECK(to_json(back) == to_json(t));
  auto broken = to_json(t);
  broken["cells"][0].erase(0);
  CHECK_THROWS_AS(tensor_from_json(broken), Error);
}

TEST_CASE("zeta") {
  auto corpus = parse_conll(std::string_view("a B-X\n\nb B-X\nc I-X\n\nd B-X\ne I-X\nf I-X\n"),
                            ColumnSpec{});
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  auto gold = extract_spans(corpus, SpanSource::gold());
  CHECK(attribute_zeta(ctx, gold, AttributeId::kELen) == Approx(2.0));
  CHECK(attribute_zeta(ctx, gold, AttributeId::kECon) == 0.0);
  CHECK(attribute_zeta(ctx, gold, AttributeId::kODen) == 1.0);
  CHECK(attribute_zeta_tokens(ctx, AttributeId::kSLen) == Approx((1.0 + 4.0 + 9.0) / 6.0));
}

TEST_CASE("paired sentence scores") {
  ColumnSpec spec;
  spec.prediction_columns = {{"a", 2}, {"b", 3}};
  auto corpus = parse_conll(std::string_view("x B-P B-P O\n\ny B-P B-P B-P\n\nz O B-P O\n"), spec);
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  auto gold = extract_spans(corpus, SpanSource::gold());
  auto pa = extract_spans(corpus, SpanSource::of("a"));
  auto pb = extract_spans(corpus, SpanSource::of("b"));
  auto part_a = bucket_test_set(gold, pa, AttributeId::kELen, ctx);
  auto part_b = bucket_test_set(gold, pb, AttributeId::kELen, ctx, 4, &part_a.plan);
  auto pairs = paired_sentence_scores(part_a, part_b, gold, pa, pb, 0);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair{1.0, 0.0});
  CHECK(pairs[1] == std::pair{1.0, 1.0});
  // Only a spurious span from "a": "b" correctly predicts nothing.
  CHECK(pairs[2] == std::pair{0.0, 1.0});
}

}  // TEST_SUITE
