#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nereval/attributes.hpp"
#include "nereval/bucketing.hpp"
#include "nereval/corpus.hpp"

namespace nereval {

// Exact-match precision/recall/F1. Zero denominators give 0.
struct PRF {
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PRF from_counts(std::size_t tp, std::size_t predicted, std::size_t gold);
  static PRF from_counts(std::size_t tp_gold, std::size_t tp_pred, std::size_t predicted,
                         std::size_t gold);
};

PRF micro_f1(std::span<const Span> gold, std::span<const Span> pred);

// matched[i] is true iff span i of `spans` has an exact (sentence, start,
// end, label) partner in `other`; each partner is used at most once.
std::vector<bool> exact_matches(std::span<const Span> spans, std::span<const Span> other);

// Per bucket: recall over gold spans in the bucket, precision over predicted
// spans in the bucket. Buckets with neither gold nor predicted spans are
// absent.
std::vector<std::optional<PRF>> bucket_prf(const SpanPartition& partition,
                                           std::span<const Span> gold,
                                           std::span<const Span> pred);

// Token-level micro F1 per bucket over non-O categories, gold versus the
// given system's predicted category for each token.
std::vector<std::optional<PRF>> token_bucket_accuracy(const Partition& tokens,
                                                      const AttributeContext& ctx,
                                                      std::size_t system);

}  // namespace nereval
