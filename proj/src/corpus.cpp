#include "nereval/corpus.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "nereval/error.hpp"

namespace nereval {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kRaggedRow: return "RaggedRow";
    case ErrorKind::kBadTag: return "BadTag";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kAlignmentMismatch: return "AlignmentMismatch";
    case ErrorKind::kUnknownSystem: return "UnknownSystem";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInsufficientBuckets: return "InsufficientBuckets";
    case ErrorKind::kTooFewTreatments: return "TooFewTreatments";
    case ErrorKind::kTooFewBlocks: return "TooFewBlocks";
    case ErrorKind::kIo: return "Io";
    case ErrorKind::kFormat: return "Format";
  }
  return "Unknown";
}

const char* to_string(Scheme scheme) {
  return scheme == Scheme::kBio ? "bio" : "bioes";
}

Scheme parse_scheme(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bio") return Scheme::kBio;
  if (lower == "bioes") return Scheme::kBioes;
  throw Error(ErrorKind::kInvalidArgument, "unknown tagging scheme '" + std::string(text) + "'");
}

std::optional<Tag> Tag::try_parse(std::string_view text) {
  if (text == "O") return Tag::outside();
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  Tag tag;
  switch (text[0]) {
    case 'B': tag.prefix = TagPrefix::kB; break;
    case 'I': tag.prefix = TagPrefix::kI; break;
    case 'E': tag.prefix = TagPrefix::kE; break;
    case 'S': tag.prefix = TagPrefix::kS; break;
    default: return std::nullopt;
  }
  tag.category = std::string(text.substr(2));
  return tag;
}

Tag Tag::parse(std::string_view text) {
  if (auto tag = try_parse(text)) return *std::move(tag);
  throw Error(ErrorKind::kBadTag, "malformed tag '" + std::string(text) + "'");
}

std::string Tag::str() const {
  switch (prefix) {
    case TagPrefix::kO: return "O";
    case TagPrefix::kB: return "B-" + category;
    case TagPrefix::kI: return "I-" + category;
    case TagPrefix::kE: return "E-" + category;
    case TagPrefix::kS: return "S-" + category;
  }
  return "O";
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::size_t Corpus::system_index(std::string_view name) const {
  auto it = std::find(systems.begin(), systems.end(), name);
  if (it == systems.end()) {
    throw Error(ErrorKind::kUnknownSystem, "unknown system '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - systems.begin());
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

void validate_spec(const ColumnSpec& spec, CorpusRole role) {
  std::vector<std::size_t> columns{spec.token_column, spec.gold_column};
  for (const auto& [name, col] : spec.prediction_columns) columns.push_back(col);
  std::sort(columns.begin(), columns.end());
  if (std::adjacent_find(columns.begin(), columns.end()) != columns.end()) {
    throw Error(ErrorKind::kInvalidArgument, "column indices must be distinct");
  }
  if (role == CorpusRole::kTrain && !spec.prediction_columns.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "training corpora carry gold tags only");
  }
}

}  // namespace

Corpus parse_conll(std::istream& in, const ColumnSpec& spec, CorpusRole role) {
  validate_spec(spec, role);
  Corpus corpus;
  corpus.role = role;
  corpus.scheme = spec.scheme;
  for (const auto& [name, col] : spec.prediction_columns) corpus.systems.push_back(name);

  std::size_t required = std::max(spec.token_column, spec.gold_column) + 1;
  for (const auto& [name, col] : spec.prediction_columns) required = std::max(required, col + 1);

  Sentence current;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    current.index = corpus.sentences.size();
    corpus.sentences.push_back(std::move(current));
    current = Sentence{};
  };

  auto tag_at = [](std::string_view field, std::size_t line_no) {
    auto tag = Tag::try_parse(field);
    if (!tag) {
      throw Error(ErrorKind::kBadTag, "line " + std::to_string(line_no) + ": malformed tag '" +
                                          std::string(field) + "'");
    }
    return *std::move(tag);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (fields[0].starts_with("-DOCSTART-")) continue;
    if (fields.size() < required) {
      throw Error(ErrorKind::kRaggedRow, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(required) + " columns, found " +
                                             std::to_string(fields.size()));
    }
    Token token;
    token.surface = std::string(fields[spec.token_column]);
    token.gold = tag_at(fields[spec.gold_column], line_no);
    token.predictions.reserve(spec.prediction_columns.size());
    for (const auto& [name, col] : spec.prediction_columns) {
      token.predictions.push_back(tag_at(fields[col], line_no));
    }
    current.tokens.push_back(std::move(token));
  }
  flush();

  if (corpus.sentences.empty()) throw Error(ErrorKind::kEmptyCorpus, "corpus has no sentences");
  return corpus;
}

Corpus parse_conll(std::string_view text, const ColumnSpec& spec, CorpusRole role) {
  std::istringstream in{std::string(text)};
  return parse_conll(in, spec, role);
}

Corpus attach_predictions(Corpus base, const std::string& system, const Corpus& pred) {
  if (base.role != CorpusRole::kTest) {
    throw Error(ErrorKind::kInvalidArgument, "predictions can only be attached to a test corpus");
  }
  if (std::find(base.systems.begin(), base.systems.end(), system) != base.systems.end()) {
    throw Error(ErrorKind::kInvalidArgument, "system '" + system + "' registered twice");
  }
  if (pred.sentences.size() != base.sentences.size()) {
    throw Error(ErrorKind::kAlignmentMismatch,
                "system '" + system + "': " + std::to_string(pred.sentences.size()) +
                    " sentences, test set has " + std::to_string(base.sentences.size()));
  }
  for (std::size_t s = 0; s < base.sentences.size(); ++s) {
    auto& tokens = base.sentences[s].tokens;
    const auto& other = pred.sentences[s].tokens;
    if (tokens.size() != other.size()) {
      throw Error(ErrorKind::kAlignmentMismatch,
                  "system '" + system + "': sentence " + std::to_string(s) + " has " +
                      std::to_string(other.size()) + " tokens, expected " +
                      std::to_string(tokens.size()));
    }
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].surface != other[t].surface) {
        throw Error(ErrorKind::kAlignmentMismatch,
                    "system '" + system + "': sentence " + std::to_string(s) + " token " +
                        std::to_string(t) + " is '" + other[t].surface + "', expected '" +
                        tokens[t].surface + "'");
      }
      tokens[t].predictions.push_back(other[t].gold);
    }
  }
  base.systems.push_back(system);
  return base;
}

std::vector<SpanFragment> decode_spans(std::span<const Tag> labels, Scheme scheme) {
  std::vector<SpanFragment> spans;
  std::optional<SpanFragment> open;
  auto close = [&] {
    if (open) spans.push_back(*std::move(open));
    open.reset();
  };

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Tag& tag = labels[i];
    TagPrefix prefix = tag.prefix;
    if (scheme == Scheme::kBio) {
      if (prefix == TagPrefix::kS) prefix = TagPrefix::kB;
      if (prefix == TagPrefix::kE) prefix = TagPrefix::kI;
    }
    const bool continues = open && open->label == tag.category;
    switch (prefix) {
      case TagPrefix::kO:
        close();
        break;
      case TagPrefix::kB:
        close();
        open = SpanFragment{i, i + 1, tag.category};
        break;
      case TagPrefix::kI:
        if (continues) {
          open->end = i + 1;
        } else {
          close();
          open = SpanFragment{i, i + 1, tag.category};
        }
        break;
      case TagPrefix::kE:
        if (continues) {
          open->end = i + 1;
          close();
        } else {
          close();
          spans.push_back(SpanFragment{i, i + 1, tag.category});
        }
        break;
      case TagPrefix::kS:
        close();
        spans.push_back(SpanFragment{i, i + 1, tag.category});
        break;
    }
  }
  close();
  return spans;
}

std::vector<Tag> encode_spans(std::span<const SpanFragment> spans, std::size_t length,
                              Scheme scheme) {
  std::vector<Tag> tags(length);
  for (const auto& span : spans) {
    if (span.start >= span.end || span.end > length || span.label.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "span outside sequence or unlabeled");
    }
    for (std::size_t i = span.start; i < span.end; ++i) {
      TagPrefix prefix = i == span.start ? TagPrefix::kB : TagPrefix::kI;
      if (scheme == Scheme::kBioes) {
        if (span.end - span.start == 1) {
          prefix = TagPrefix::kS;
        } else if (i + 1 == span.end) {
          prefix = TagPrefix::kE;
        }
      }
      tags[i] = Tag{prefix, span.label};
    }
  }
  return tags;
}

std::string join_surface(const Sentence& sentence, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += sentence.tokens[i].surface;
  }
  return out;
}

std::vector<Span> extract_spans(const Corpus& corpus, const SpanSource& source) {
  std::optional<std::size_t> column;
  if (source.system) column = corpus.system_index(*source.system);

  std::vector<Span> spans;
  std::vector<Tag> labels;
  for (const auto& sentence : corpus.sentences) {
    labels.clear();
    labels.reserve(sentence.size());
    for (const auto& token : sentence.tokens) {
      labels.push_back(column ? token.predictions[*column] : token.gold);
    }
    for (auto& frag : decode_spans(labels, corpus.scheme)) {
      spans.push_back(Span{sentence.index, frag.start, frag.end, std::move(frag.label),
                           join_surface(sentence, frag.start, frag.end)});
    }
  }
  return spans;
}

}  // namespace nereval
