#include "nereval/attributes.hpp"

#include <algorithm>
#include <cctype>

#include "nereval/error.hpp"

namespace nereval {

const char* to_string(AttributeId attr) {
  switch (attr) {
    case AttributeId::kELen: return "eLen";
    case AttributeId::kSLen: return "sLen";
    case AttributeId::kEDen: return "eDen";
    case AttributeId::kODen: return "oDen";
    case AttributeId::kECon: return "eCon";
    case AttributeId::kEFre: return "eFre";
    case AttributeId::kTCon: return "tCon";
    case AttributeId::kTFre: return "tFre";
  }
  return "?";
}

AttributeId parse_attribute(std::string_view name) {
  for (auto attr : kAllAttributes) {
    if (name == to_string(attr)) return attr;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown attribute '" + std::string(name) + "'");
}

AttributeUnit unit_of(AttributeId attr) {
  return attr == AttributeId::kELen || attr == AttributeId::kSLen ? AttributeUnit::kTokens
                                                                  : AttributeUnit::kRatio;
}

bool applies_to_tokens(AttributeId attr) {
  return attr != AttributeId::kELen && attr != AttributeId::kECon && attr != AttributeId::kEFre;
}

std::string TrainingStats::normalize(std::string_view surface) const {
  std::string out(surface);
  if (lowercase) {
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
  return out;
}

bool TrainingStats::in_vocabulary(std::string_view surface) const {
  return vocabulary.contains(normalize(surface));
}

std::vector<std::string> gold_token_labels(const Sentence& sentence, Scheme scheme) {
  std::vector<Tag> tags;
  tags.reserve(sentence.size());
  for (const auto& token : sentence.tokens) tags.push_back(token.gold);
  std::vector<std::string> labels(sentence.size(), "O");
  for (const auto& frag : decode_spans(tags, scheme)) {
    for (std::size_t i = frag.start; i < frag.end; ++i) labels[i] = frag.label;
  }
  return labels;
}

TrainingStats build_training_stats(const Corpus& train, bool lowercase) {
  if (train.role != CorpusRole::kTrain) {
    throw Error(ErrorKind::kInvalidArgument, "training statistics need a train-role corpus");
  }
  TrainingStats stats;
  stats.lowercase = lowercase;
  for (const auto& sentence : train.sentences) {
    auto labels = gold_token_labels(sentence, train.scheme);
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      auto key = stats.normalize(sentence.tokens[i].surface);
      auto& row = stats.tokens[key];
      ++row.total;
      ++row.by_label[labels[i]];
      ++stats.total_tokens;
      stats.vocabulary.insert(std::move(key));
    }
  }
  for (const auto& span : extract_spans(train, SpanSource::gold())) {
    auto& row = stats.entities[stats.normalize(span.surface)];
    ++row.total;
    ++row.by_label[span.label];
    ++stats.total_entities;
  }
  return stats;
}

namespace {

nlohmann::json table_to_json(const std::map<std::string, LabelCounts>& table) {
  auto rows = nlohmann::json::object();
  for (const auto& [surface, counts] : table) {
    rows[surface] = {{"total", counts.total}, {"labels", counts.by_label}};
  }
  return rows;
}

std::map<std::string, LabelCounts> table_from_json(const nlohmann::json& rows) {
  std::map<std::string, LabelCounts> table;
  for (const auto& [surface, row] : rows.items()) {
    LabelCounts counts;
    counts.total = row.at("total").get<std::size_t>();
    counts.by_label = row.at("labels").get<std::map<std::string, std::size_t>>();
    std::size_t sum = 0;
    for (const auto& [label, n] : counts.by_label) sum += n;
    if (sum != counts.total) {
      throw Error(ErrorKind::kFormat, "label counts for '" + surface + "' do not sum to total");
    }
    table.emplace(surface, std::move(counts));
  }
  return table;
}

}  // namespace

nlohmann::json to_json(const TrainingStats& stats) {
  return {
      {"format", "nereval.training_stats"},
      {"version", TrainingStats::kFormatVersion},
      {"lowercase", stats.lowercase},
      {"total_entities", stats.total_entities},
      {"total_tokens", stats.total_tokens},
      {"entities", table_to_json(stats.entities)},
      {"tokens", table_to_json(stats.tokens)},
      {"vocabulary", stats.vocabulary},
  };
}

TrainingStats training_stats_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "nereval.training_stats") {
      throw Error(ErrorKind::kFormat, "not a training statistics document");
    }
    if (doc.at("version").get<int>() != TrainingStats::kFormatVersion) {
      throw Error(ErrorKind::kFormat, "unsupported training statistics version");
    }
    TrainingStats stats;
    stats.lowercase = doc.at("lowercase").get<bool>();
    stats.total_entities = doc.at("total_entities").get<std::size_t>();
    stats.total_tokens = doc.at("total_tokens").get<std::size_t>();
    stats.entities = table_from_json(doc.at("entities"));
    stats.tokens = table_from_json(doc.at("tokens"));
    stats.vocabulary = doc.at("vocabulary").get<std::set<std::string>>();
    return stats;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("training statistics: ") + e.what());
  }
}

double entity_length(const Span& span) { return static_cast<double>(span.length()); }

double sentence_length(const Sentence& sentence) { return static_cast<double>(sentence.size()); }

double entity_density(std::size_t gold_entities, const Sentence& sentence) {
  return static_cast<double>(gold_entities) / sentence_length(sentence);
}

double oov_density(const Sentence& sentence, const TrainingStats& stats) {
  std::size_t unseen = 0;
  for (const auto& token : sentence.tokens) {
    if (!stats.in_vocabulary(token.surface)) ++unseen;
  }
  return static_cast<double>(unseen) / sentence_length(sentence);
}

namespace {

double label_share(const std::map<std::string, LabelCounts>& table, const std::string& key,
                   std::string_view label) {
  auto row = table.find(key);
  if (row == table.end() || row->second.total == 0) return 0.0;
  auto hit = row->second.by_label.find(std::string(label));
  if (hit == row->second.by_label.end()) return 0.0;
  return static_cast<double>(hit->second) / static_cast<double>(row->second.total);
}

double surface_share(const std::map<std::string, LabelCounts>& table, const std::string& key,
                     std::size_t total) {
  if (total == 0) return 0.0;
  auto row = table.find(key);
  if (row == table.end()) return 0.0;
  return static_cast<double>(row->second.total) / static_cast<double>(total);
}

}  // namespace

double entity_consistency(const Span& span, const TrainingStats& stats) {
  return label_share(stats.entities, stats.normalize(span.surface), span.label);
}

double entity_frequency(const Span& span, const TrainingStats& stats) {
  return surface_share(stats.entities, stats.normalize(span.surface), stats.total_entities);
}

double token_consistency(std::string_view surface, std::string_view label,
                         const TrainingStats& stats) {
  return label_share(stats.tokens, stats.normalize(surface), label);
}

double token_frequency(std::string_view surface, const TrainingStats& stats) {
  return surface_share(stats.tokens, stats.normalize(surface), stats.total_tokens);
}

AttributeContext::AttributeContext(const Corpus& test, const TrainingStats& stats)
    : test_(&test), stats_(&stats) {
  gold_entities_.reserve(test.sentences.size());
  oov_density_.reserve(test.sentences.size());
  gold_labels_.reserve(test.sentences.size());
  std::vector<Tag> tags;
  for (const auto& sentence : test.sentences) {
    tags.clear();
    for (const auto& token : sentence.tokens) tags.push_back(token.gold);
    auto frags = decode_spans(tags, test.scheme);
    gold_entities_.push_back(frags.size());
    oov_density_.push_back(oov_density(sentence, stats));
    std::vector<std::string> labels(sentence.size(), "O");
    for (const auto& frag : frags) {
      for (std::size_t i = frag.start; i < frag.end; ++i) labels[i] = frag.label;
    }
    gold_labels_.push_back(std::move(labels));
  }
}

const Sentence& AttributeContext::sentence_of(std::size_t index) const {
  if (index >= test_->sentences.size()) {
    throw Error(ErrorKind::kInvalidArgument, "sentence index out of range");
  }
  return test_->sentences[index];
}

double AttributeContext::span_value(const Span& span, AttributeId attr) const {
  const Sentence& sentence = sentence_of(span.sentence);
  switch (attr) {
    case AttributeId::kELen: return entity_length(span);
    case AttributeId::kSLen: return sentence_length(sentence);
    case AttributeId::kEDen: return entity_density(gold_entities_[span.sentence], sentence);
    case AttributeId::kODen: return oov_density_[span.sentence];
    case AttributeId::kECon: return entity_consistency(span, *stats_);
    case AttributeId::kEFre: return entity_frequency(span, *stats_);
    case AttributeId::kTCon:
    case AttributeId::kTFre: {
      double sum = 0.0;
      for (std::size_t i = span.start; i < span.end; ++i) {
        const auto& surface = sentence.tokens[i].surface;
        sum += attr == AttributeId::kTCon ? token_consistency(surface, span.label, *stats_)
                                          : token_frequency(surface, *stats_);
      }
      return sum / static_cast<double>(span.length());
    }
  }
  return 0.0;
}

double AttributeContext::token_value(TokenRef token, AttributeId attr) const {
  const Sentence& sentence = sentence_of(token.sentence);
  if (token.position >= sentence.size()) {
    throw Error(ErrorKind::kInvalidArgument, "token position out of range");
  }
  switch (attr) {
    case AttributeId::kSLen: return sentence_length(sentence);
    case AttributeId::kEDen: return entity_density(gold_entities_[token.sentence], sentence);
    case AttributeId::kODen: return oov_density_[token.sentence];
    case AttributeId::kTCon:
      return token_consistency(sentence.tokens[token.position].surface,
                               gold_labels_[token.sentence][token.position], *stats_);
    case AttributeId::kTFre: return token_frequency(sentence.tokens[token.position].surface, *stats_);
    default:
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(to_string(attr)) + " is not defined for tokens");
  }
}

std::vector<double> AttributeContext::span_values(std::span<const Span> spans,
                                                  AttributeId attr) const {
  std::vector<double> values;
  values.reserve(spans.size());
  for (const auto& span : spans) values.push_back(span_value(span, attr));
  return values;
}

std::vector<TokenRef> AttributeContext::all_tokens() const {
  std::vector<TokenRef> refs;
  refs.reserve(test_->token_count());
  for (const auto& sentence : test_->sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) refs.push_back({sentence.index, i});
  }
  return refs;
}

const std::string& AttributeContext::gold_token_label(TokenRef token) const {
  return gold_labels_.at(token.sentence).at(token.position);
}

double span_attribute(const Span& span, AttributeId attr, const AttributeContext& ctx) {
  return ctx.span_value(span, attr);
}

}  // namespace nereval
