#include "nereval/pipeline.hpp"

#include <numeric>

#include "nereval/error.hpp"

namespace nereval {

Comparison compare_systems(const AttributeContext& ctx, const PerformanceTensor& tensor,
                           std::size_t a, std::size_t b, double alpha) {
  const Corpus& corpus = ctx.corpus();
  Comparison out;
  out.system_a = tensor.systems.at(a);
  out.system_b = tensor.systems.at(b);
  out.entries = comparative_diagnose(tensor, a, b);

  const auto gold = extract_spans(corpus, SpanSource::gold());
  const auto pred_a = extract_spans(corpus, SpanSource::of(out.system_a));
  const auto pred_b = extract_spans(corpus, SpanSource::of(out.system_b));

  for (const auto& entry : out.entries) {
    const std::size_t j = tensor.attribute_index(entry.attribute);
    const auto& plan = tensor.plans[j];
    auto part_a = bucket_test_set(gold, pred_a, entry.attribute, ctx, plan.size(), &plan);
    auto part_b = bucket_test_set(gold, pred_b, entry.attribute, ctx, plan.size(), &plan);
    auto test_bucket = [&](std::size_t k) {
      auto pairs = paired_sentence_scores(part_a, part_b, gold, pred_a, pred_b, k);
      BucketTest t{k, stats::wilcoxon_signed_rank(pairs), false};
      t.significant = !t.wilcoxon.all_zero && t.wilcoxon.p_value < alpha;
      return t;
    };
    out.high_tests.push_back(test_bucket(entry.high_bucket));
    out.low_tests.push_back(test_bucket(entry.low_bucket));
  }
  return out;
}

ReportBundle evaluate(const AttributeContext& ctx, const EvaluationOptions& options,
                      const PerformanceTensor* precomputed) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  ReportBundle bundle;
  bundle.alpha = options.alpha;
  bundle.tensor = precomputed ? *precomputed : build_tensor(ctx, options.tensor);
  const auto& t = bundle.tensor;
  if (t.systems != ctx.corpus().systems) {
    throw Error(ErrorKind::kInvalidArgument, "tensor systems do not match the test corpus");
  }

  bundle.model_wise = model_wise_table(t, options.alpha);

  const auto gold = extract_spans(ctx.corpus(), SpanSource::gold());
  std::vector<std::size_t> everyone(t.systems.size());
  std::iota(everyone.begin(), everyone.end(), 0);
  std::vector<double> zetas;
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    const AttributeId attr = t.attributes[j];
    AttributeWiseRow row;
    row.attribute = attr;
    row.zeta = attribute_zeta(ctx, gold, attr);
    if (applies_to_tokens(attr)) row.zeta_tokens = attribute_zeta_tokens(ctx, attr);
    row.rho = attribute_rho(t, j);
    row.friedman = bucket_friedman(t, j, everyone);
    row.significant = row.friedman && row.friedman->p_value < options.alpha;
    zetas.push_back(row.zeta);
    bundle.attribute_wise.push_back(std::move(row));
  }
  // A single dataset normalizes against itself.
  const auto normalized = normalize_zeta({zetas});
  for (std::size_t j = 0; j < bundle.attribute_wise.size(); ++j) {
    bundle.attribute_wise[j].zeta_normalized = normalized.front()[j];
  }

  for (std::size_t i = 0; i < t.systems.size(); ++i) {
    bundle.self_diagnosis.push_back(self_diagnose(t, i));
  }
  if (options.all_pairs) {
    for (std::size_t a = 0; a < t.systems.size(); ++a) {
      for (std::size_t b = a + 1; b < t.systems.size(); ++b) {
        bundle.comparisons.push_back(compare_systems(ctx, t, a, b, options.alpha));
      }
    }
  }
  return bundle;
}

}  // namespace nereval
