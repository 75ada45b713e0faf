#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nereval/corpus.hpp"

namespace nereval {

enum class AttributeId { kELen, kSLen, kEDen, kODen, kECon, kEFre, kTCon, kTFre };

inline constexpr std::array<AttributeId, 8> kAllAttributes = {
    AttributeId::kELen, AttributeId::kSLen, AttributeId::kEDen, AttributeId::kODen,
    AttributeId::kECon, AttributeId::kEFre, AttributeId::kTCon, AttributeId::kTFre};

// "eLen", "sLen", ... as used in reports and on the command line.
const char* to_string(AttributeId attr);
AttributeId parse_attribute(std::string_view name);

enum class AttributeUnit { kTokens, kRatio };
AttributeUnit unit_of(AttributeId attr);

// Whether the attribute is defined for individual test tokens.
bool applies_to_tokens(AttributeId attr);

struct LabelCounts {
  std::size_t total = 0;
  std::map<std::string, std::size_t> by_label;

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

// Surface/label tables over the training corpus. Lookups apply the same
// casing policy the tables were built with.
struct TrainingStats {
  static constexpr int kFormatVersion = 1;

  std::map<std::string, LabelCounts> entities;
  std::map<std::string, LabelCounts> tokens;
  std::set<std::string> vocabulary;
  std::size_t total_entities = 0;
  std::size_t total_tokens = 0;
  bool lowercase = false;

  std::string normalize(std::string_view surface) const;
  bool in_vocabulary(std::string_view surface) const;

  friend bool operator==(const TrainingStats&, const TrainingStats&) = default;
};

TrainingStats build_training_stats(const Corpus& train, bool lowercase = false);

nlohmann::json to_json(const TrainingStats& stats);
TrainingStats training_stats_from_json(const nlohmann::json& doc);

// Category covering each token of the sentence under gold annotation, "O" elsewhere.
std::vector<std::string> gold_token_labels(const Sentence& sentence, Scheme scheme);

double entity_length(const Span& span);
double sentence_length(const Sentence& sentence);
double entity_density(std::size_t gold_entities, const Sentence& sentence);
double oov_density(const Sentence& sentence, const TrainingStats& stats);
double entity_consistency(const Span& span, const TrainingStats& stats);
double entity_frequency(const Span& span, const TrainingStats& stats);
double token_consistency(std::string_view surface, std::string_view label,
                         const TrainingStats& stats);
double token_frequency(std::string_view surface, const TrainingStats& stats);

struct TokenRef {
  std::size_t sentence = 0;
  std::size_t position = 0;
};

// Binds a test corpus to training statistics and caches the per-sentence
// quantities (gold entity counts, OOV counts, gold token labels) every
// attribute query needs.
class AttributeContext {
 public:
  AttributeContext(const Corpus& test, const TrainingStats& stats);

  const Corpus& corpus() const { return *test_; }
  const TrainingStats& stats() const { return *stats_; }

  // Token-native attributes (tCon, tFre) are lifted to spans by the
  // unweighted mean over the span's tokens, labeled with the span's label.
  double span_value(const Span& span, AttributeId attr) const;
  // Throws Error(kInvalidArgument) for span-only attributes (eLen, eCon, eFre).
  double token_value(TokenRef token, AttributeId attr) const;

  std::vector<double> span_values(std::span<const Span> spans, AttributeId attr) const;
  std::vector<TokenRef> all_tokens() const;
  const std::string& gold_token_label(TokenRef token) const;

 private:
  const Sentence& sentence_of(std::size_t index) const;

  const Corpus* test_;
  const TrainingStats* stats_;
  std::vector<std::size_t> gold_entities_;
  std::vector<double> oov_density_;
  std::vector<std::vector<std::string>> gold_labels_;
};

double span_attribute(const Span& span, AttributeId attr, const AttributeContext& ctx);

}  // namespace nereval
