#include "nereval/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nereval/error.hpp"

namespace nereval {

std::string digest_bytes(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, "error while reading '" + path.string() + "'");
  return buf.str();
}

std::string digest_file(const std::filesystem::path& path) { return digest_bytes(read_text(path)); }

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::kIo, "cannot create directory '" + path.parent_path().string() +
                                      "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::kIo, "error while writing '" + path.string() + "'");
}

namespace {

double round6(double v) {
  v = std::stod(fmt::format("{:.6g}", v));
  return v == 0.0 ? 0.0 : v;  // drop negative zero
}

}  // namespace

nlohmann::json round_numbers(nlohmann::json doc) {
  if (doc.is_number_float()) return round6(doc.get<double>());
  if (doc.is_structured()) {
    for (auto& child : doc) child = round_numbers(std::move(child));
  }
  return doc;
}

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

nlohmann::json test_to_json(const stats::TestResult& r) {
  return {{"statistic", r.statistic},
          {"p_value", r.p_value},
          {"n", r.n},
          {"k", r.k},
          {"method", r.method == stats::Method::kExact ? "exact" : "approximate"},
          {"all_zero", r.all_zero}};
}

stats::TestResult test_from_json(const nlohmann::json& j) {
  stats::TestResult r;
  r.statistic = j.at("statistic").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.n = j.at("n").get<std::size_t>();
  r.k = j.at("k").get<std::size_t>();
  r.method = j.at("method") == "exact" ? stats::Method::kExact : stats::Method::kApproximate;
  r.all_zero = j.at("all_zero").get<bool>();
  return r;
}

nlohmann::json entry_to_json(const DiagnosisEntry& e) {
  return {{"attribute", to_string(e.attribute)},
          {"high_bucket", e.high_bucket},
          {"high_label", e.high_label},
          {"high_value", e.high_value},
          {"high_tied", e.high_tied},
          {"low_bucket", e.low_bucket},
          {"low_label", e.low_label},
          {"low_value", e.low_value},
          {"low_tied", e.low_tied},
          // From the rounded ends, so a parsed report re-emits the same gap.
          {"gap", round6(e.high_value) - round6(e.low_value)}};
}

DiagnosisEntry entry_from_json(const nlohmann::json& j) {
  DiagnosisEntry e;
  e.attribute = parse_attribute(j.at("attribute").get<std::string>());
  e.high_bucket = j.at("high_bucket").get<std::size_t>();
  e.high_label = j.at("high_label").get<std::string>();
  e.high_value = j.at("high_value").get<double>();
  e.high_tied = j.at("high_tied").get<bool>();
  e.low_bucket = j.at("low_bucket").get<std::size_t>();
  e.low_label = j.at("low_label").get<std::string>();
  e.low_value = j.at("low_value").get<double>();
  e.low_tied = j.at("low_tied").get<bool>();
  return e;
}

nlohmann::json bucket_test_to_json(const BucketTest& t) {
  return {{"bucket", t.bucket}, {"wilcoxon", test_to_json(t.wilcoxon)}, {"significant", t.significant}};
}

BucketTest bucket_test_from_json(const nlohmann::json& j) {
  return BucketTest{j.at("bucket").get<std::size_t>(), test_from_json(j.at("wilcoxon")),
                    j.at("significant").get<bool>()};
}

SignificanceScope parse_scope(const std::string& s) {
  if (s == "model") return SignificanceScope::kModel;
  if (s == "dataset") return SignificanceScope::kDataset;
  return SignificanceScope::kNone;
}

}  // namespace

nlohmann::json to_json(const ReportBundle& b) {
  auto inputs = nlohmann::json::array();
  for (const auto& in : b.inputs) {
    inputs.push_back({{"role", in.role}, {"name", in.name}, {"digest", in.digest}});
  }
  auto model_wise = nlohmann::json::array();
  for (const auto& row : b.model_wise) {
    model_wise.push_back({{"system", row.system},
                          {"attribute", to_string(row.attribute)},
                          {"spearman", opt(row.measures.spearman)},
                          {"std", opt(row.measures.std_dev)},
                          {"p_value", opt(row.p_value)},
                          {"significant", row.significant},
                          {"scope", to_string(row.scope)}});
  }
  auto attribute_wise = nlohmann::json::array();
  for (const auto& row : b.attribute_wise) {
    attribute_wise.push_back({{"attribute", to_string(row.attribute)},
                              {"zeta", row.zeta},
                              {"zeta_normalized", row.zeta_normalized},
                              {"zeta_tokens", opt(row.zeta_tokens)},
                              {"rho", opt(row.rho)},
                              {"friedman", row.friedman ? test_to_json(*row.friedman) : nlohmann::json()},
                              {"significant", row.significant}});
  }
  auto self = nlohmann::json::array();
  for (std::size_t i = 0; i < b.self_diagnosis.size(); ++i) {
    auto entries = nlohmann::json::array();
    for (const auto& e : b.self_diagnosis[i]) entries.push_back(entry_to_json(e));
    self.push_back({{"system", b.tensor.systems.at(i)}, {"entries", entries}});
  }
  auto comparisons = nlohmann::json::array();
  for (const auto& c : b.comparisons) {
    auto entries = nlohmann::json::array();
    for (std::size_t e = 0; e < c.entries.size(); ++e) {
      auto doc = entry_to_json(c.entries[e]);
      doc["high_test"] = bucket_test_to_json(c.high_tests.at(e));
      doc["low_test"] = bucket_test_to_json(c.low_tests.at(e));
      entries.push_back(std::move(doc));
    }
    comparisons.push_back(
        {{"system_a", c.system_a}, {"system_b", c.system_b}, {"entries", entries}});
  }
  return {{"schema", "nereval.report"},
          {"version", kReportSchemaVersion},
          {"tool_version", b.tool_version},
          {"inputs", inputs},
          {"config", b.config},
          {"alpha", b.alpha},
          {"tensor", to_json(b.tensor)},
          {"model_wise", model_wise},
          {"attribute_wise", attribute_wise},
          {"self_diagnosis", self},
          {"comparisons", comparisons}};
}

ReportBundle report_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema") != "nereval.report" || doc.at("version") != kReportSchemaVersion) {
      throw Error(ErrorKind::kFormat, "not a version-1 report document");
    }
    ReportBundle b;
    b.tool_version = doc.at("tool_version").get<std::string>();
    for (const auto& in : doc.at("inputs")) {
      b.inputs.push_back({in.at("role").get<std::string>(), in.at("name").get<std::string>(),
                          in.at("digest").get<std::string>()});
    }
    b.config = doc.at("config").get<std::map<std::string, std::string>>();
    b.alpha = doc.at("alpha").get<double>();
    b.tensor = tensor_from_json(doc.at("tensor"));
    for (const auto& r : doc.at("model_wise")) {
      ModelWiseRow row;
      row.system = r.at("system").get<std::string>();
      row.attribute = parse_attribute(r.at("attribute").get<std::string>());
      row.measures.spearman = opt_from<double>(r.at("spearman"));
      row.measures.std_dev = opt_from<double>(r.at("std"));
      row.p_value = opt_from<double>(r.at("p_value"));
      row.significant = r.at("significant").get<bool>();
      row.scope = parse_scope(r.at("scope").get<std::string>());
      b.model_wise.push_back(std::move(row));
    }
    for (const auto& r : doc.at("attribute_wise")) {
      AttributeWiseRow row;
      row.attribute = parse_attribute(r.at("attribute").get<std::string>());
      row.zeta = r.at("zeta").get<double>();
      row.zeta_normalized = r.at("zeta_normalized").get<double>();
      row.zeta_tokens = opt_from<double>(r.at("zeta_tokens"));
      row.rho = opt_from<double>(r.at("rho"));
      if (!r.at("friedman").is_null()) row.friedman = test_from_json(r.at("friedman"));
      row.significant = r.at("significant").get<bool>();
      b.attribute_wise.push_back(std::move(row));
    }
    for (const auto& s : doc.at("self_diagnosis")) {
      std::vector<DiagnosisEntry> entries;
      for (const auto& e : s.at("entries")) entries.push_back(entry_from_json(e));
      b.self_diagnosis.push_back(std::move(entries));
    }
    for (const auto& c : doc.at("comparisons")) {
      Comparison cmp;
      cmp.system_a = c.at("system_a").get<std::string>();
      cmp.system_b = c.at("system_b").get<std::string>();
      for (const auto& e : c.at("entries")) {
        cmp.entries.push_back(entry_from_json(e));
        cmp.high_tests.push_back(bucket_test_from_json(e.at("high_test")));
        cmp.low_tests.push_back(bucket_test_from_json(e.at("low_test")));
      }
      b.comparisons.push_back(std::move(cmp));
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("report: ") + e.what());
  }
}

std::string render_json(const ReportBundle& bundle) {
  return round_numbers(to_json(bundle)).dump(2) + "\n";
}

namespace {

std::string pct(double v) { return fmt::format("{:.1f}", 100.0 * v); }

std::string pct(const std::optional<double>& v) { return v ? pct(*v) : "-"; }

std::string sci(double p) { return fmt::format("{:.3g}", p); }

// Non-significant cells are struck through; cells whose significance could
// not be tested carry a trailing asterisk.
std::string mark(const std::string& text, const std::optional<double>& p, double alpha) {
  if (text == "-") return text;
  if (!p) return text + "*";
  if (*p >= alpha) return "~~" + text + "~~";
  return text;
}

void table_header(std::ostringstream& out, const std::vector<std::string>& columns,
                  std::size_t left_aligned = 1) {
  out << "|";
  for (const auto& c : columns) out << " " << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i < left_aligned ? "---|" : "---:|");
  out << "\n";
}

void table_row(std::ostringstream& out, const std::vector<std::string>& cells) {
  out << "|";
  for (const auto& c : cells) out << " " << c << " |";
  out << "\n";
}

const ModelWiseRow* find_row(const ReportBundle& b, const std::string& system, AttributeId attr) {
  for (const auto& row : b.model_wise) {
    if (row.system == system && row.attribute == attr) return &row;
  }
  return nullptr;
}

void render_comparison(std::ostringstream& out, const Comparison& c) {
  out << "### " << c.system_a << " vs " << c.system_b << "\n\n";
  table_header(out, {"Attribute", "Max gap bucket", "Gap (%)", "p", "Min gap bucket", "Gap (%)",
                     "p"});
  for (std::size_t e = 0; e < c.entries.size(); ++e) {
    const auto& entry = c.entries[e];
    auto p_text = [&](const BucketTest& t) {
      if (t.wilcoxon.all_zero) return std::string("n/a");
      return sci(t.wilcoxon.p_value) + (t.significant ? "" : " (ns)");
    };
    table_row(out, {to_string(entry.attribute), entry.high_label, pct(entry.high_value),
                    p_text(c.high_tests.at(e)), entry.low_label, pct(entry.low_value),
                    p_text(c.low_tests.at(e))});
  }
  out << "\n";
}

}  // namespace

std::string render_markdown(const ReportBundle& b) {
  const auto& t = b.tensor;
  std::ostringstream out;
  out << "# NER evaluation report\n\n";
  for (const auto& [key, value] : b.config) out << "- " << key << ": `" << value << "`\n";
  out << "- alpha: `" << b.alpha << "`\n\n";
  out << "All scores are percentages. ~~Struck~~ values did not pass the Friedman test "
         "(p >= alpha); values marked * could not be tested.\n\n";

  out << "## Overall\n\n";
  table_header(out, {"System", "P", "R", "F1"});
  for (std::size_t i = 0; i < t.systems.size(); ++i) {
    const auto& p = t.overall[i];
    table_row(out, {t.systems[i], pct(p.precision), pct(p.recall), pct(p.f1)});
  }
  out << "\n";

  std::vector<std::string> header{"System"};
  for (auto a : t.attributes) header.emplace_back(to_string(a));

  out << "## Model-wise: Spearman correlation\n\n";
  table_header(out, header);
  for (const auto& system : t.systems) {
    std::vector<std::string> cells{system};
    for (auto a : t.attributes) {
      const auto* row = find_row(b, system, a);
      const auto v = row ? row->measures.spearman : std::nullopt;
      cells.push_back(mark(v ? fmt::format("{:.0f}", 100.0 * *v) : "-", row ? row->p_value : std::nullopt, b.alpha));
    }
    table_row(out, cells);
  }
  out << "\n## Model-wise: standard deviation\n\n";
  table_header(out, header);
  for (const auto& system : t.systems) {
    std::vector<std::string> cells{system};
    for (auto a : t.attributes) {
      const auto* row = find_row(b, system, a);
      const auto v = row ? row->measures.std_dev : std::nullopt;
      cells.push_back(mark(pct(v), row ? row->p_value : std::nullopt, b.alpha));
    }
    table_row(out, cells);
  }
  out << "\n## Model-wise: Friedman p-values\n\n";
  table_header(out, header);
  for (const auto& system : t.systems) {
    std::vector<std::string> cells{system};
    for (auto a : t.attributes) {
      const auto* row = find_row(b, system, a);
      cells.push_back(row && row->p_value
                          ? sci(*row->p_value) + " (" + to_string(row->scope) + ")"
                          : "-");
    }
    table_row(out, cells);
  }

  out << "\n## Attribute-wise\n\n";
  table_header(out, {"Attribute", "zeta", "zeta (normalized)", "zeta over tokens", "rho",
                     "Friedman p"});
  for (const auto& row : b.attribute_wise) {
    const std::optional<double> p =
        row.friedman ? std::optional<double>(row.friedman->p_value) : std::nullopt;
    table_row(out, {to_string(row.attribute), fmt::format("{:.4g}", row.zeta),
                    fmt::format("{:.4g}", row.zeta_normalized),
                    row.zeta_tokens ? fmt::format("{:.4g}", *row.zeta_tokens) : "-",
                    mark(row.rho ? fmt::format("{:.2f}", *row.rho) : "-", p, b.alpha),
                    p ? sci(*p) : "-"});
  }

  out << "\n## Buckets\n";
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    const auto& plan = t.plans[j];
    out << "\n### " << to_string(t.attributes[j]) << " (" << to_string(plan.strategy) << ")\n\n";
    std::vector<std::string> cols{""};
    for (const auto& label : plan.labels) cols.push_back(label);
    table_header(out, cols);
    std::vector<std::string> interval{"Interval"};
    std::vector<std::string> population{"Gold spans"};
    for (std::size_t k = 0; k < plan.size(); ++k) {
      interval.push_back(plan.intervals[k].str());
      population.push_back(std::to_string(t.population.at(j).at(k)));
    }
    table_row(out, interval);
    table_row(out, population);
    for (std::size_t i = 0; i < t.systems.size(); ++i) {
      std::vector<std::string> cells{t.systems[i] + " F1"};
      for (std::size_t k = 0; k < plan.size(); ++k) cells.push_back(pct(t.f1(i, j, k)));
      table_row(out, cells);
    }
  }

  out << "\n## Self-diagnosis\n\n";
  table_header(out, {"System", "Attribute", "Best", "F1", "Worst", "F1", "Gap"});
  for (std::size_t i = 0; i < b.self_diagnosis.size(); ++i) {
    for (const auto& e : b.self_diagnosis[i]) {
      table_row(out, {t.systems.at(i), to_string(e.attribute),
                      e.high_label + (e.high_tied ? " (tie)" : ""), pct(e.high_value),
                      e.low_label + (e.low_tied ? " (tie)" : ""), pct(e.low_value),
                      pct(e.gap())});
    }
  }

  out << "\n## Comparative diagnosis\n\n";
  if (b.comparisons.empty()) out << "No system pairs.\n\n";
  for (const auto& c : b.comparisons) render_comparison(out, c);
  return out.str();
}

CrossDataset aggregate_reports(const std::vector<std::pair<std::string, ReportBundle>>& reports) {
  if (reports.empty()) throw Error(ErrorKind::kInvalidArgument, "no reports to aggregate");
  CrossDataset s;
  auto in_every = [&](auto member) {
    return [&, member](const auto& value) {
      for (const auto& [name, b] : reports) {
        const auto& list = b.tensor.*member;
        if (std::find(list.begin(), list.end(), value) == list.end()) return false;
      }
      return true;
    };
  };
  const auto& first = reports.front().second.tensor;
  std::copy_if(first.systems.begin(), first.systems.end(), std::back_inserter(s.systems),
               in_every(&PerformanceTensor::systems));
  std::copy_if(first.attributes.begin(), first.attributes.end(), std::back_inserter(s.attributes),
               in_every(&PerformanceTensor::attributes));

  for (const auto& [name, b] : reports) {
    s.datasets.push_back(name);
    std::vector<double> zeta;
    for (auto a : s.attributes) {
      for (const auto& row : b.attribute_wise) {
        if (row.attribute == a) zeta.push_back(row.zeta);
      }
    }
    if (zeta.size() != s.attributes.size()) {
      throw Error(ErrorKind::kFormat, "report '" + name + "' lacks attribute-wise rows");
    }
    s.zeta.push_back(zeta);
  }
  s.zeta_normalized = normalize_zeta(s.zeta);

  for (const auto& system : s.systems) {
    std::vector<std::vector<std::optional<double>>> per_dataset;
    for (const auto& [name, b] : reports) {
      std::vector<std::optional<double>> row;
      for (auto a : s.attributes) {
        const auto* r = find_row(b, system, a);
        row.push_back(r ? r->measures.spearman : std::nullopt);
      }
      per_dataset.push_back(row);
    }
    s.mean_spearman.push_back(mean_correlations(per_dataset));
  }
  return s;
}

std::string render_cross_dataset(const CrossDataset& s) {
  std::ostringstream out;
  out << "# Cross-dataset summary\n\n";
  for (const auto& d : s.datasets) out << "- `" << d << "`\n";
  std::vector<std::string> header{"System"};
  for (auto a : s.attributes) header.emplace_back(to_string(a));

  out << "\n## Mean Spearman correlation\n\n";
  table_header(out, header);
  for (std::size_t i = 0; i < s.systems.size(); ++i) {
    std::vector<std::string> cells{s.systems[i]};
    for (const auto& v : s.mean_spearman[i]) cells.push_back(v ? fmt::format("{:.0f}", 100.0 * *v) : "-");
    table_row(out, cells);
  }

  header[0] = "Dataset";
  out << "\n## Normalized zeta\n\n";
  table_header(out, header);
  for (std::size_t d = 0; d < s.datasets.size(); ++d) {
    std::vector<std::string> cells{s.datasets[d]};
    for (double v : s.zeta_normalized[d]) cells.push_back(fmt::format("{:.2f}", v));
    table_row(out, cells);
  }
  return out.str();
}

nlohmann::json to_json(const CrossDataset& s) {
  nlohmann::json attrs = nlohmann::json::array();
  for (auto a : s.attributes) attrs.push_back(to_string(a));
  nlohmann::json spearman = nlohmann::json::array();
  for (const auto& row : s.mean_spearman) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(opt(v));
    spearman.push_back(r);
  }
  return round_numbers({{"schema", "nereval.cross-dataset"},
                        {"version", 1},
                        {"datasets", s.datasets},
                        {"systems", s.systems},
                        {"attributes", attrs},
                        {"mean_spearman", spearman},
                        {"zeta", s.zeta},
                        {"zeta_normalized", s.zeta_normalized}});
}

const char* to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::kRadar: return "radar";
    case ChartKind::kHeatmap: return "heatmap";
    case ChartKind::kDiagnosisBars: return "diagnosis-bars";
  }
  return "?";
}

namespace {

std::string csv_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) { return fmt::format("{:.6g}", v == 0.0 ? 0.0 : v); }

}  // namespace

std::string render_chart_data(const ReportBundle& b, ChartKind kind) {
  const auto& t = b.tensor;
  switch (kind) {
    case ChartKind::kRadar: {
      nlohmann::json attrs = nlohmann::json::array();
      nlohmann::json zeta = nlohmann::json::array();
      nlohmann::json zeta_raw = nlohmann::json::array();
      nlohmann::json rho = nlohmann::json::array();
      for (const auto& row : b.attribute_wise) {
        attrs.push_back(to_string(row.attribute));
        zeta.push_back(row.zeta_normalized);
        zeta_raw.push_back(row.zeta);
        rho.push_back(opt(row.rho));
      }
      nlohmann::json doc = {
          {"kind", "radar"},
          {"axis", attrs},
          {"series", {{{"name", "zeta"}, {"values", zeta}}, {{"name", "rho"}, {"values", rho}}}},
          {"zeta_raw", zeta_raw}};
      return round_numbers(doc).dump(2) + "\n";
    }
    case ChartKind::kHeatmap: {
      std::size_t width = 0;
      for (const auto& plan : t.plans) width = std::max(width, plan.size());
      std::string out = "\"system_a\",\"system_b\",\"attribute\"";
      for (std::size_t k = 1; k <= width; ++k) out += ",\"bucket " + std::to_string(k) + "\"";
      out += "\n";
      for (const auto& c : b.comparisons) {
        const auto a = t.system_index(c.system_a);
        const auto bb = t.system_index(c.system_b);
        for (std::size_t j = 0; j < t.attributes.size(); ++j) {
          out += csv_quote(c.system_a) + "," + csv_quote(c.system_b) + "," +
                 csv_quote(to_string(t.attributes[j]));
          for (std::size_t k = 0; k < width; ++k) {
            out += ",";
            if (k < t.plans[j].size()) {
              auto fa = t.f1(a, j, k);
              auto fb = t.f1(bb, j, k);
              if (fa && fb) out += csv_number(*fa - *fb);
            }
          }
          out += "\n";
        }
      }
      return out;
    }
    case ChartKind::kDiagnosisBars: {
      std::string out =
          "\"system\",\"attribute\",\"worst_bucket\",\"worst\",\"gap\",\"best_bucket\",\"best\"\n";
      for (std::size_t i = 0; i < b.self_diagnosis.size(); ++i) {
        for (const auto& e : b.self_diagnosis[i]) {
          out += csv_quote(t.systems.at(i)) + "," + csv_quote(to_string(e.attribute)) + "," +
                 csv_quote(e.low_label) + "," + csv_number(e.low_value) + "," +
                 csv_number(e.gap()) + "," + csv_quote(e.high_label) + "," +
                 csv_number(e.high_value) + "\n";
        }
      }
      return out;
    }
  }
  return {};
}

void emit_json(const ReportBundle& bundle, const std::filesystem::path& path) {
  write_text(path, render_json(bundle));
}

void emit_markdown(const ReportBundle& bundle, const std::filesystem::path& path) {
  write_text(path, render_markdown(bundle));
}

void emit_chart_data(const ReportBundle& bundle, ChartKind kind, const std::filesystem::path& path) {
  write_text(path, render_chart_data(bundle, kind));
}

}  // namespace nereval
