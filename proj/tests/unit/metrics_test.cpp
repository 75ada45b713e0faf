#include <doctest.h>

#include <random>

#include "nereval/metrics.hpp"
#include "support.hpp"

using namespace nereval;
using doctest::Approx;

namespace {

Span sp(std::size_t sentence, std::size_t start, std::size_t end, std::string label = "X") {
  return Span{sentence, start, end, std::move(label), ""};
}

std::vector<Span> random_spans(std::mt19937& rng, std::size_t n) {
  std::vector<Span> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = rng() % 6;
    out.push_back(sp(rng() % 4, start, start + 1 + rng() % 3, rng() % 2 ? "A" : "B"));
  }
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("zero-denominator conventions") {
  auto none = micro_f1(std::vector<Span>{sp(0, 0, 1)}, std::vector<Span>{});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  auto empty = micro_f1(std::vector<Span>{}, std::vector<Span>{});
  CHECK(empty.f1 == 0.0);
}

TEST_CASE("identity and a hand-counted fixture") {
  std::vector<Span> gold{sp(0, 0, 1), sp(0, 2, 4), sp(1, 0, 2), sp(1, 3, 4, "Y")};
  auto same = micro_f1(gold, gold);
  CHECK(same.f1 == 1.0);

  std::vector<Span> pred{sp(0, 0, 1), sp(0, 2, 4), sp(1, 0, 2), sp(1, 3, 4, "X"), sp(2, 0, 1)};
  auto prf = micro_f1(gold, pred);
  CHECK(prf.true_positives == 3);
  CHECK(prf.precision == Approx(0.6).epsilon(1e-12));
  CHECK(prf.recall == Approx(0.75).epsilon(1e-12));
  CHECK(prf.f1 == Approx(2 * 0.45 / 1.35).epsilon(1e-12));
}

TEST_CASE("duplicates match at most once") {
  std::vector<Span> gold{sp(0, 0, 1)};
  std::vector<Span> pred{sp(0, 0, 1), sp(0, 0, 1)};
  CHECK(micro_f1(gold, pred).true_positives == 1);
  CHECK(exact_matches(pred, gold) == std::vector<bool>{true, false});
}

TEST_CASE("random span sets match the brute-force counter") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto gold = random_spans(rng, rng() % 12);
    auto pred = random_spans(rng, rng() % 12);
    auto prf = micro_f1(gold, pred);
    CHECK(prf.true_positives == testing::brute_force_true_positives(gold, pred));
    CHECK(prf.true_positives <= std::min(gold.size(), pred.size()));

    // Symmetric under reordering.
    std::shuffle(gold.begin(), gold.end(), rng);
    std::shuffle(pred.begin(), pred.end(), rng);
    CHECK(micro_f1(gold, pred).f1 == prf.f1);
  }
}

TEST_CASE("bucket scores aggregate to the overall counts") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto gold = random_spans(rng, 1 + rng() % 15);
    auto pred = random_spans(rng, rng() % 15);
    std::vector<double> gv, pv;
    for (const auto& s : gold) gv.push_back(static_cast<double>(s.length()));
    for (const auto& s : pred) pv.push_back(static_cast<double>(s.length()));
    SpanPartition part;
    part.plan = plan_buckets(AttributeId::kELen, gv, 4);
    part.gold = partition_values(part.plan, gv).members;
    part.predicted = partition_values(part.plan, pv).members;

    auto buckets = bucket_prf(part, gold, pred);
    auto overall = micro_f1(gold, pred);
    std::size_t tp = 0, g = 0, p = 0;
    for (const auto& b : buckets) {
      if (!b) continue;
      tp += b->true_positives;
      g += b->gold;
      p += b->predicted;
      CHECK(b->f1 >= 0.0);
      CHECK(b->f1 <= 1.0);
    }
    CHECK(tp == overall.true_positives);
    CHECK(g == gold.size());
    CHECK(p == pred.size());
  }
}

TEST_CASE("single bucket equals micro F1") {
  std::vector<Span> gold{sp(0, 0, 1), sp(0, 2, 4), sp(1, 0, 2)};
  std::vector<Span> pred{sp(0, 0, 1), sp(1, 0, 3)};
  SpanPartition part;
  part.plan.intervals = {Interval{0, 100, true, true}};
  part.plan.labels = {"B1"};
  part.gold = {{0, 1, 2}};
  part.predicted = {{0, 1}};
  auto b = bucket_prf(part, gold, pred);
  REQUIRE(b[0]);
  CHECK(b[0]->f1 == micro_f1(gold, pred).f1);
}

TEST_CASE("length-planted fixture") {
  auto corpus = parse_conll(std::string_view("a B-X B-X\nb O O\nc B-X O\nd I-X O\ne I-X O\nf I-X O\n"),
                            ColumnSpec{{}, 1, {{"m", 2}}, Scheme::kBio});
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  auto gold = extract_spans(corpus, SpanSource::gold());
  auto pred = extract_spans(corpus, SpanSource::of("m"));
  auto part = bucket_test_set(gold, pred, AttributeId::kELen, ctx);
  auto b = bucket_prf(part, gold, pred);
  REQUIRE(b[0]);
  REQUIRE(b[3]);
  CHECK(b[0]->f1 == 1.0);
  CHECK(b[3]->f1 == 0.0);
  CHECK(b[3]->precision == 0.0);
  CHECK_FALSE(b[1]);
  CHECK_FALSE(b[2]);
}

TEST_CASE("token bucket scores") {
  ColumnSpec spec;
  spec.prediction_columns = {{"same", 2}, {"none", 3}, {"mixed", 4}};
  auto corpus = parse_conll(std::string_view("a B-X B-X O B-X\n"
                                             "b I-X I-X O O\n"
                                             "c O O O B-Y\n"
                                             "\n"
                                             "d B-Y B-Y O B-Y\n"),
                            spec);
  TrainingStats stats;
  AttributeContext ctx(corpus, stats);
  auto tokens = bucket_tokens(ctx, AttributeId::kSLen, 4);
  REQUIRE(tokens.plan.size() == 2);

  for (auto b : token_bucket_accuracy(tokens, ctx, 0)) {
    REQUIRE(b);
    CHECK(b->f1 == 1.0);
  }
  for (auto b : token_bucket_accuracy(tokens, ctx, 1)) CHECK(b->f1 == 0.0);

  // Sentence 1: gold X X O, predicted X O Y -> tp 1, pred 2, gold 2.
  auto mixed = token_bucket_accuracy(tokens, ctx, 2);
  CHECK(mixed[1]->true_positives == 1);
  CHECK(mixed[1]->f1 == 0.5);
  CHECK(mixed[0]->f1 == 1.0);
}

}  // TEST_SUITE
