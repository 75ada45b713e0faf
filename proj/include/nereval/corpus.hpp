#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nereval {

enum class Scheme { kBio, kBioes };

const char* to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

enum class TagPrefix { kB, kI, kO, kE, kS };

// One output label such as "B-PER" or "O".
struct Tag {
  TagPrefix prefix = TagPrefix::kO;
  std::string category;

  static Tag outside() { return Tag{}; }
  // Throws Error(kBadTag) when `text` is not "O" or "<B|I|E|S>-<category>".
  static Tag parse(std::string_view text);
  // Returns std::nullopt instead of throwing.
  static std::optional<Tag> try_parse(std::string_view text);

  bool is_outside() const { return prefix == TagPrefix::kO; }
  std::string str() const;

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct Token {
  std::string surface;
  Tag gold;
  std::vector<Tag> predictions;  // one per registered system, in registration order
};

struct Sentence {
  std::vector<Token> tokens;
  std::size_t index = 0;

  std::size_t size() const { return tokens.size(); }
};

// Half-open token range [start, end) carrying an entity category.
struct SpanFragment {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  friend bool operator==(const SpanFragment&, const SpanFragment&) = default;
};

struct Span {
  std::size_t sentence = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  std::string surface;  // token surfaces joined by single spaces

  std::size_t length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class CorpusRole { kTrain, kTest };

struct Corpus {
  std::vector<Sentence> sentences;
  std::vector<std::string> systems;
  CorpusRole role = CorpusRole::kTest;
  Scheme scheme = Scheme::kBio;

  std::size_t token_count() const;
  // Index of `name` in `systems`; throws Error(kUnknownSystem).
  std::size_t system_index(std::string_view name) const;
};

struct ColumnSpec {
  std::size_t token_column = 0;
  std::size_t gold_column = 1;
  std::vector<std::pair<std::string, std::size_t>> prediction_columns;
  Scheme scheme = Scheme::kBio;
};

// Reads whitespace-separated CoNLL columns. Blank lines separate sentences,
// "-DOCSTART-" lines are ignored, CRLF is accepted.
Corpus parse_conll(std::istream& in, const ColumnSpec& spec,
                   CorpusRole role = CorpusRole::kTest);
Corpus parse_conll(std::string_view text, const ColumnSpec& spec,
                   CorpusRole role = CorpusRole::kTest);

// Registers `system` from a separate file aligned line-by-line with `base`.
// `pred` is the parsed prediction file whose gold column holds the system's
// tags. Any token surface or sentence-shape mismatch throws
// Error(kAlignmentMismatch).
Corpus attach_predictions(Corpus base, const std::string& system, const Corpus& pred);

// Lenient decoding: an I (or E) tag that cannot continue the open span
// starts a new one. Under BIO, S behaves as B and E as I.
std::vector<SpanFragment> decode_spans(std::span<const Tag> labels, Scheme scheme);

// Inverse of decode_spans for well-formed, disjoint fragments.
std::vector<Tag> encode_spans(std::span<const SpanFragment> spans, std::size_t length,
                              Scheme scheme);

// Selects which tag column spans are decoded from.
struct SpanSource {
  std::optional<std::string> system;  // nullopt selects gold

  static SpanSource gold() { return {}; }
  static SpanSource of(std::string name) { return SpanSource{std::move(name)}; }
};

std::vector<Span> extract_spans(const Corpus& corpus, const SpanSource& source);

std::string join_surface(const Sentence& sentence, std::size_t start, std::size_t end);

}  // namespace nereval
