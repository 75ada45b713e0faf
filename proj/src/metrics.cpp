#include "nereval/metrics.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "nereval/error.hpp"

namespace nereval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

using SpanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::string_view>;

SpanKey key_of(const Span& s) { return {s.sentence, s.start, s.end, s.label}; }

}  // namespace

PRF PRF::from_counts(std::size_t tp, std::size_t predicted, std::size_t gold) {
  return from_counts(tp, tp, predicted, gold);
}

PRF PRF::from_counts(std::size_t tp_gold, std::size_t tp_pred, std::size_t predicted,
                     std::size_t gold) {
  PRF out;
  out.true_positives = tp_gold;
  out.predicted = predicted;
  out.gold = gold;
  out.precision = ratio(tp_pred, predicted);
  out.recall = ratio(tp_gold, gold);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

std::vector<bool> exact_matches(std::span<const Span> spans, std::span<const Span> other) {
  std::map<SpanKey, std::size_t> available;
  for (const auto& s : other) ++available[key_of(s)];
  std::vector<bool> matched(spans.size(), false);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    auto it = available.find(key_of(spans[i]));
    if (it != available.end() && it->second > 0) {
      --it->second;
      matched[i] = true;
    }
  }
  return matched;
}

PRF micro_f1(std::span<const Span> gold, std::span<const Span> pred) {
  auto matched = exact_matches(gold, pred);
  auto tp = static_cast<std::size_t>(std::count(matched.begin(), matched.end(), true));
  return PRF::from_counts(tp, pred.size(), gold.size());
}

std::vector<std::optional<PRF>> bucket_prf(const SpanPartition& partition,
                                           std::span<const Span> gold,
                                           std::span<const Span> pred) {
  const auto gold_hit = exact_matches(gold, pred);
  const auto pred_hit = exact_matches(pred, gold);
  const std::size_t buckets = partition.plan.size();
  if (partition.gold.size() != buckets || partition.predicted.size() != buckets) {
    throw Error(ErrorKind::kInvalidArgument, "partition does not match its plan");
  }

  std::vector<std::optional<PRF>> out(buckets);
  for (std::size_t k = 0; k < buckets; ++k) {
    const auto& g = partition.gold[k];
    const auto& p = partition.predicted[k];
    if (g.empty() && p.empty()) continue;
    std::size_t tp_gold = 0;
    std::size_t tp_pred = 0;
    for (auto i : g) tp_gold += gold_hit.at(i) ? 1 : 0;
    for (auto i : p) tp_pred += pred_hit.at(i) ? 1 : 0;
    out[k] = PRF::from_counts(tp_gold, tp_pred, p.size(), g.size());
  }
  return out;
}

std::vector<std::optional<PRF>> token_bucket_accuracy(const Partition& tokens,
                                                      const AttributeContext& ctx,
                                                      std::size_t system) {
  const Corpus& corpus = ctx.corpus();
  if (system >= corpus.systems.size()) {
    throw Error(ErrorKind::kUnknownSystem, "system index out of range");
  }
  // Predicted category per token, decoded the same way as gold.
  std::vector<std::vector<std::string>> predicted;
  predicted.reserve(corpus.sentences.size());
  std::vector<Tag> tags;
  for (const auto& sentence : corpus.sentences) {
    tags.clear();
    for (const auto& token : sentence.tokens) tags.push_back(token.predictions[system]);
    std::vector<std::string> labels(sentence.size(), "O");
    for (const auto& frag : decode_spans(tags, corpus.scheme)) {
      for (std::size_t i = frag.start; i < frag.end; ++i) labels[i] = frag.label;
    }
    predicted.push_back(std::move(labels));
  }

  const auto refs = ctx.all_tokens();
  std::vector<std::optional<PRF>> out(tokens.members.size());
  for (std::size_t k = 0; k < tokens.members.size(); ++k) {
    if (tokens.members[k].empty()) continue;
    std::size_t tp = 0, n_pred = 0, n_gold = 0;
    for (auto idx : tokens.members[k]) {
      const TokenRef ref = refs.at(idx);
      const std::string& g = ctx.gold_token_label(ref);
      const std::string& p = predicted[ref.sentence][ref.position];
      if (g != "O") ++n_gold;
      if (p != "O") ++n_pred;
      if (g != "O" && g == p) ++tp;
    }
    out[k] = PRF::from_counts(tp, n_pred, n_gold);
  }
  return out;
}

}  // namespace nereval
