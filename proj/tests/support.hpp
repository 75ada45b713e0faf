#pragma once

// Fixture builders and brute-force oracles shared by the unit and acceptance
// suites. The oracles deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nereval/corpus.hpp"
#include "nereval/pipeline.hpp"

namespace testing {

inline std::vector<nereval::Tag> tags(std::initializer_list<const char*> texts) {
  std::vector<nereval::Tag> out;
  for (const char* t : texts) out.push_back(nereval::Tag::parse(t));
  return out;
}

// One row per token: surface, gold tag, then any prediction tags; an empty
// row separates sentences.
inline std::string conll(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " " : "") + row[i];
    out += "\n";
  }
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nereval_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A position starts a span iff it is tagged and cannot extend its left
// neighbour; a span then covers every following I of the same category.
inline std::vector<nereval::SpanFragment> reference_decode_bio(
    const std::vector<nereval::Tag>& labels) {
  using nereval::TagPrefix;
  std::vector<nereval::SpanFragment> out;
  auto extends = [&](std::size_t i) {
    return i > 0 && labels[i].prefix == TagPrefix::kI && !labels[i - 1].is_outside() &&
           labels[i - 1].category == labels[i].category;
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].is_outside() || extends(i)) continue;
    std::size_t end = i + 1;
    while (end < labels.size() && extends(end)) ++end;
    out.push_back({i, end, labels[i].category});
  }
  return out;
}

// Greedy matching by exhaustive search over gold spans, O(|gold| * |pred|).
inline std::size_t brute_force_true_positives(const std::vector<nereval::Span>& gold,
                                              const std::vector<nereval::Span>& pred) {
  std::vector<bool> used(gold.size(), false);
  std::size_t tp = 0;
  for (const auto& p : pred) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (!used[g] && gold[g].sentence == p.sentence && gold[g].start == p.start &&
          gold[g].end == p.end && gold[g].label == p.label) {
        used[g] = true;
        ++tp;
        break;
      }
    }
  }
  return tp;
}

// Rank by counting: strictly smaller values plus half the tied block.
inline std::vector<double> count_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double x : v) {
      if (x < v[i]) ++less;
      if (x == v[i]) ++equal;
    }
    r[i] = less + (equal + 1.0) / 2.0;
  }
  return r;
}

inline double plain_pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Two-sided exact signed-rank p by enumerating all 2^n sign assignments of
// the tied |d| ranks: P(|W+ - S/2| >= observed).
inline double enumerate_wilcoxon_p(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> d;
  for (auto [x, y] : pairs) {
    if (x - y != 0.0) d.push_back(x - y);
  }
  std::vector<double> mag;
  for (double v : d) mag.push_back(std::abs(v));
  const auto ranks = count_ranks(mag);
  double total = 0, w_plus = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total += ranks[i];
    if (d[i] > 0) w_plus += ranks[i];
  }
  const double observed = std::abs(w_plus - total / 2.0);
  const std::uint64_t count = std::uint64_t{1} << d.size();
  std::uint64_t extreme = 0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (mask >> i & 1u) w += ranks[i];
    }
    if (std::abs(w - total / 2.0) >= observed - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(count);
}

#ifdef NEREVAL_TEST_DATA
inline const char* const kWorkedSystems[] = {"crf#1", "crf#2", "crf#3", "lstm#1", "lstm#2", "lstm#3"};

inline std::string worked_dir() { return std::string(NEREVAL_TEST_DATA) + "/worked"; }

// The bundled worked example: restarts of two models in columns 2..7.
struct WorkedFixture {
  nereval::Corpus train;
  nereval::Corpus test;
  nereval::TrainingStats stats;
};

inline WorkedFixture load_worked() {
  nereval::ColumnSpec spec;
  for (std::size_t i = 0; i < 6; ++i) spec.prediction_columns.push_back({kWorkedSystems[i], i + 2});
  WorkedFixture f;
  f.train = nereval::parse_conll(std::string_view(nereval::read_text(worked_dir() + "/train.conll")),
                                 nereval::ColumnSpec{}, nereval::CorpusRole::kTrain);
  f.test = nereval::parse_conll(std::string_view(nereval::read_text(worked_dir() + "/test.conll")), spec);
  f.stats = nereval::build_training_stats(f.train);
  return f;
}

inline std::vector<std::string> worked_cli_args(const std::string& command) {
  std::vector<std::string> args{"nereval", "--train", worked_dir() + "/train.conll", "--test",
                                worked_dir() + "/test.conll"};
  for (std::size_t i = 0; i < 6; ++i) {
    args.push_back("--pred");
    args.push_back(std::string(kWorkedSystems[i]) + "=col:" + std::to_string(i + 2));
  }
  args.push_back(command);
  return args;
}
#endif

}  // namespace testing
