#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nereval/error.hpp"

namespace nereval::cli {

namespace fs = std::filesystem;

namespace {

struct PredictionSource {
  std::string name;
  std::optional<std::size_t> column;  // inline column of the test file
  std::string path;
};

std::vector<PredictionSource> parse_prediction_sources(const std::vector<std::string>& specs) {
  std::vector<PredictionSource> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "--pred expects NAME=PATH or NAME=col:N, got '" + spec + "'");
    }
    PredictionSource src;
    src.name = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    if (value.starts_with("col:")) {
      try {
        src.column = std::stoul(value.substr(4));
      } catch (const std::exception&) {
        throw Error(ErrorKind::kInvalidArgument, "bad column in --pred '" + spec + "'");
      }
    } else {
      src.path = value;
    }
    out.push_back(std::move(src));
  }
  return out;
}

std::string require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw Error(ErrorKind::kInvalidArgument, "no " + what + " file given");
  if (!fs::exists(path)) throw Error(ErrorKind::kIo, what + " file '" + path + "' not found");
  return read_text(path);
}

// Column count of the first content line; prediction files carry the
// system's tag in their last column.
std::size_t column_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(f);
    if (cols.empty() || cols.front().starts_with("-DOCSTART-")) continue;
    return cols.size();
  }
  return 0;
}

struct Inputs {
  Corpus test;
  TrainingStats stats;
  std::vector<InputDigest> digests;
};

TrainingStats load_stats(const RunConfig& config, Scheme scheme,
                         std::vector<InputDigest>& digests) {
  if (!config.stats_path.empty() && fs::exists(config.stats_path)) {
    const auto text = read_text(config.stats_path);
    digests.push_back({"stats", fs::path(config.stats_path).filename().string(), digest_bytes(text)});
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, "'" + config.stats_path + "': " + e.what());
    }
    auto stats = training_stats_from_json(doc);
    if (stats.lowercase != config.lowercase) {
      throw Error(ErrorKind::kInvalidArgument,
                  "'" + config.stats_path + "' was built with a different --lowercase setting");
    }
    return stats;
  }
  if (config.train_path.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no training data: pass --train or an existing --stats");
  }
  const auto text = require_file(config.train_path, "training");
  digests.push_back({"train", fs::path(config.train_path).filename().string(), digest_bytes(text)});
  ColumnSpec spec{config.token_column, config.gold_column, {}, scheme};
  auto stats = build_training_stats(parse_conll(std::string_view(text), spec, CorpusRole::kTrain),
                                    config.lowercase);
  if (!config.stats_path.empty()) write_text(config.stats_path, to_json(stats).dump(1) + "\n");
  return stats;
}

Corpus load_test(const RunConfig& config, Scheme scheme, std::vector<InputDigest>& digests) {
  const auto sources = parse_prediction_sources(config.predictions);
  if (sources.empty()) throw Error(ErrorKind::kInvalidArgument, "no prediction source given (--pred)");

  ColumnSpec spec{config.token_column, config.gold_column, {}, scheme};
  for (const auto& src : sources) {
    if (src.column) spec.prediction_columns.emplace_back(src.name, *src.column);
  }
  const auto text = require_file(config.test_path, "test");
  digests.push_back({"test", fs::path(config.test_path).filename().string(), digest_bytes(text)});
  Corpus test = parse_conll(std::string_view(text), spec, CorpusRole::kTest);

  for (const auto& src : sources) {
    if (src.column) continue;
    const auto pred_text = require_file(src.path, "prediction");
    digests.push_back({"pred:" + src.name, fs::path(src.path).filename().string(),
                       digest_bytes(pred_text)});
    const std::size_t cols = column_count(pred_text);
    if (cols < 2) {
      throw Error(ErrorKind::kRaggedRow, "prediction file '" + src.path + "' needs token and tag columns");
    }
    ColumnSpec pred_spec{0, cols - 1, {}, scheme};
    Corpus pred = parse_conll(std::string_view(pred_text), pred_spec, CorpusRole::kTest);
    test = attach_predictions(std::move(test), src.name, pred);
  }
  return test;
}

Inputs load_inputs(const RunConfig& config) {
  const Scheme scheme = parse_scheme(config.scheme);
  Inputs in;
  in.stats = load_stats(config, scheme, in.digests);
  in.test = load_test(config, scheme, in.digests);
  return in;
}

std::vector<AttributeId> selected_attributes(const RunConfig& config) {
  if (config.attributes.empty()) return {kAllAttributes.begin(), kAllAttributes.end()};
  std::vector<AttributeId> out;
  for (const auto& name : config.attributes) {
    if (name.empty()) continue;
    const auto attr = parse_attribute(name);
    if (std::find(out.begin(), out.end(), attr) == out.end()) out.push_back(attr);
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "--attributes selected nothing");
  return out;
}

std::size_t parse_count(const std::string& text) {
  std::size_t used = 0;
  unsigned long n = 0;
  try {
    n = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n < 2) {
    throw Error(ErrorKind::kInvalidArgument, "bucket count must be an integer >= 2, got '" + text + "'");
  }
  return n;
}

nlohmann::json plans_document(const std::vector<BucketPlan>& plans) {
  auto list = nlohmann::json::array();
  for (const auto& p : plans) list.push_back(to_json(p));
  return {{"format", "nereval.plans"}, {"version", 1}, {"plans", list}};
}

TensorOptions tensor_options(const RunConfig& config) {
  TensorOptions opts;
  opts.attributes = selected_attributes(config);
  for (const auto& item : config.buckets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      opts.default_buckets = parse_count(item);
    } else {
      opts.buckets[parse_attribute(item.substr(0, eq))] = parse_count(item.substr(eq + 1));
    }
  }
  if (!config.plan_path.empty() && fs::exists(config.plan_path)) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_text(config.plan_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, "'" + config.plan_path + "': " + e.what());
    }
    if (doc.value("format", "") != "nereval.plans") {
      throw Error(ErrorKind::kFormat, "'" + config.plan_path + "' is not a bucket plan file");
    }
    for (const auto& p : doc.at("plans")) {
      auto plan = bucket_plan_from_json(p);
      opts.fixed_plans[plan.attribute] = std::move(plan);
    }
  }
  return opts;
}

void maybe_write_plans(const RunConfig& config, const std::vector<BucketPlan>& plans) {
  if (config.plan_path.empty() || fs::exists(config.plan_path)) return;
  write_text(config.plan_path, plans_document(plans).dump(2) + "\n");
}

std::map<std::string, std::string> config_echo(const RunConfig& config, const TensorOptions& opts) {
  std::string attrs;
  for (auto a : opts.attributes) attrs += (attrs.empty() ? "" : ",") + std::string(to_string(a));
  std::string buckets = std::to_string(opts.default_buckets);
  for (const auto& [attr, m] : opts.buckets) buckets += fmt::format(",{}={}", to_string(attr), m);
  return {{"scheme", to_string(parse_scheme(config.scheme))},
          {"attributes", attrs},
          {"buckets", buckets},
          {"lowercase", config.lowercase ? "true" : "false"},
          {"fixed_plans", opts.fixed_plans.empty() ? "false" : "true"}};
}

bool wants(const RunConfig& config, std::string_view format) {
  return std::find(config.formats.begin(), config.formats.end(), format) != config.formats.end();
}

void validate_formats(const RunConfig& config) {
  for (const auto& f : config.formats) {
    if (f != "json" && f != "md" && f != "csv") {
      throw Error(ErrorKind::kInvalidArgument, "unknown --format '" + f + "'");
    }
  }
}

ReportBundle run_evaluation(const RunConfig& config, const Inputs& in, bool all_pairs) {
  EvaluationOptions options;
  options.tensor = tensor_options(config);
  options.alpha = config.alpha;
  options.all_pairs = all_pairs;
  AttributeContext ctx(in.test, in.stats);

  std::optional<PerformanceTensor> loaded;
  if (!config.tensor_path.empty() && fs::exists(config.tensor_path)) {
    try {
      loaded = tensor_from_json(nlohmann::json::parse(read_text(config.tensor_path)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kFormat, "'" + config.tensor_path + "': " + e.what());
    }
  }
  ReportBundle bundle = evaluate(ctx, options, loaded ? &*loaded : nullptr);
  bundle.inputs = in.digests;
  bundle.config = config_echo(config, options.tensor);
  maybe_write_plans(config, bundle.tensor.plans);
  if (!config.tensor_path.empty() && !loaded) {
    write_text(config.tensor_path, to_json(bundle.tensor).dump() + "\n");
  }
  return bundle;
}

void write_outputs(const RunConfig& config, const ReportBundle& bundle, const std::string& stem,
                   std::ostream& out) {
  const fs::path dir(config.out_dir);
  auto report = [&](const fs::path& path, auto&& emit) {
    emit(path);
    out << "wrote " << path.string() << "\n";
  };
  if (wants(config, "json")) {
    report(dir / (stem + ".json"), [&](const fs::path& p) { emit_json(bundle, p); });
  }
  if (wants(config, "md")) {
    report(dir / (stem + ".md"), [&](const fs::path& p) { emit_markdown(bundle, p); });
  }
  if (wants(config, "csv")) {
    report(dir / "radar.json", [&](const fs::path& p) { emit_chart_data(bundle, ChartKind::kRadar, p); });
    report(dir / "heatmap.csv", [&](const fs::path& p) { emit_chart_data(bundle, ChartKind::kHeatmap, p); });
    report(dir / "diagnosis_bars.csv",
           [&](const fs::path& p) { emit_chart_data(bundle, ChartKind::kDiagnosisBars, p); });
  }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "nereval: " << to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "nereval: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_formats(config);
    const Inputs in = load_inputs(config);
    const ReportBundle bundle = run_evaluation(config, in, true);
    for (std::size_t i = 0; i < bundle.tensor.systems.size(); ++i) {
      out << fmt::format("{}: F1 {:.2f}\n", bundle.tensor.systems[i],
                         100.0 * bundle.tensor.overall[i].f1);
    }
    if (config.out_dir.empty()) {
      out << render_markdown(bundle);
    } else {
      write_outputs(config, bundle, "report", out);
    }
    return 0;
  });
}

int cmd_compare(const RunConfig& config, const std::string& system_a, const std::string& system_b,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_formats(config);
    const Inputs in = load_inputs(config);
    const std::size_t a = in.test.system_index(system_a);
    const std::size_t b = in.test.system_index(system_b);
    ReportBundle bundle = run_evaluation(config, in, false);
    AttributeContext ctx(in.test, in.stats);
    bundle.comparisons = {compare_systems(ctx, bundle.tensor, a, b, config.alpha)};
    const auto& cmp = bundle.comparisons.front();
    out << fmt::format("{} vs {}\n", system_a, system_b);
    for (std::size_t e = 0; e < cmp.entries.size(); ++e) {
      const auto& entry = cmp.entries[e];
      const auto& high = cmp.high_tests[e].wilcoxon;
      out << fmt::format("  {:<5} max gap {:+.1f} at {} (p={}{}), min gap {:+.1f} at {}\n",
                         to_string(entry.attribute), 100.0 * entry.high_value, entry.high_label,
                         high.all_zero ? std::string("n/a") : fmt::format("{:.3g}", high.p_value),
                         high.all_zero ? ", all differences zero" : "", 100.0 * entry.low_value,
                         entry.low_label);
    }
    if (!config.out_dir.empty()) write_outputs(config, bundle, "compare", out);
    return 0;
  });
}

int cmd_buckets(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scheme scheme = parse_scheme(config.scheme);
    std::vector<InputDigest> digests;
    const TrainingStats stats = load_stats(config, scheme, digests);
    ColumnSpec spec{config.token_column, config.gold_column, {}, scheme};
    const Corpus test =
        parse_conll(std::string_view(require_file(config.test_path, "test")), spec, CorpusRole::kTest);
    const TensorOptions opts = tensor_options(config);
    AttributeContext ctx(test, stats);
    const auto gold = extract_spans(test, SpanSource::gold());
    if (gold.empty()) throw Error(ErrorKind::kInvalidArgument, "test set has no gold entities");
    const auto plans = fit_plans(ctx, gold, opts);

    out << fmt::format("{} gold spans\n", gold.size());
    for (const auto& plan : plans) {
      auto part = partition_values(plan, ctx.span_values(gold, plan.attribute));
      out << fmt::format("{} ({}{})\n", to_string(plan.attribute), to_string(plan.strategy),
                         plan.too_few_distinct ? ", fewer buckets than requested" : "");
      for (std::size_t k = 0; k < plan.size(); ++k) {
        out << fmt::format("  {:<3} {:<20} {}\n", plan.labels[k], plan.intervals[k].str(),
                           part.members[k].size());
      }
      if (part.clamped > 0) {
        out << fmt::format("  warning: {} values outside the plan were clamped\n", part.clamped);
      }
    }
    maybe_write_plans(config, plans);
    return 0;
  });
}

int cmd_aggregate(const RunConfig& config, const std::vector<std::string>& reports, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::pair<std::string, ReportBundle>> loaded;
    for (const auto& entry : reports) {
      // NAME=PATH, or a bare path named after its directory.
      const auto eq = entry.find('=');
      const std::string path = eq == std::string::npos ? entry : entry.substr(eq + 1);
      std::string name = eq == std::string::npos ? "" : entry.substr(0, eq);
      if (name.empty()) name = fs::absolute(path).parent_path().filename().string();
      const auto text = require_file(path, "report");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::kFormat, "report '" + path + "' is not JSON: " + e.what());
      }
      loaded.emplace_back(name, report_from_json(doc));
    }
    const auto summary = aggregate_reports(loaded);
    if (config.out_dir.empty()) {
      out << render_cross_dataset(summary);
      return 0;
    }
    const fs::path dir(config.out_dir);
    auto wants = [&](const char* f) {
      return std::find(config.formats.begin(), config.formats.end(), f) != config.formats.end();
    };
    if (wants("json")) {
      write_text(dir / "aggregate.json", to_json(summary).dump(2) + "\n");
      out << "wrote " << (dir / "aggregate.json").string() << "\n";
    }
    if (wants("md")) {
      write_text(dir / "aggregate.md", render_cross_dataset(summary));
      out << "wrote " << (dir / "aggregate.md").string() << "\n";
    }
    return 0;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribute-aided, bucketed evaluation of named entity recognition systems"};
  app.set_config("--config", "", "Flat key = value file mirroring the long flags");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  app.add_option("--train", config.train_path, "Training file (token and gold tag columns)");
  app.add_option("--test", config.test_path, "Test file (token and gold tag columns)");
  app.add_option("--pred", config.predictions,
                 "System predictions as NAME=PATH, or NAME=col:N for a column of the test file");
  app.add_option("--scheme", config.scheme, "Tagging scheme")
      ->check(CLI::IsMember({"bio", "bioes"}, CLI::ignore_case));
  app.add_option("--attributes", config.attributes, "Comma-separated attributes (default: all)")
      ->delimiter(',');
  app.add_option("--buckets", config.buckets, "Bucket count N, or attr=N overrides")
      ->delimiter(',');
  app.add_option("--alpha", config.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--out", config.out_dir, "Output directory");
  app.add_option("--format", config.formats, "Output formats: json, md, csv")->delimiter(',');
  app.add_option("--stats", config.stats_path, "Training statistics JSON (read if present, else written)");
  app.add_option("--plan", config.plan_path, "Bucket plan JSON (read if present, else written)");
  app.add_option("--tensor", config.tensor_path, "Performance tensor JSON (read if present, else written)");
  app.add_flag("--lowercase", config.lowercase, "Match surfaces case-insensitively");
  app.add_option("--token-column", config.token_column, "Token column index");
  app.add_option("--gold-column", config.gold_column, "Gold tag column index");

  auto* analyze = app.add_subcommand("analyze", "Full report: tensor, measures, diagnoses");
  auto* compare = app.add_subcommand("compare", "Comparative diagnosis of two systems");
  std::string system_a, system_b;
  compare->add_option("system_a", system_a, "First system")->required();
  compare->add_option("system_b", system_b, "Second system")->required();
  auto* buckets = app.add_subcommand("buckets", "Print bucket plans and populations");
  auto* aggregate = app.add_subcommand("aggregate", "Average correlations over reports of several datasets");
  std::vector<std::string> reports;
  aggregate->add_option("reports", reports, "Report JSON files, as PATH or NAME=PATH")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    err << "nereval: --alpha must lie strictly between 0 and 1\n";
    return 2;
  }
  if (*analyze) return cmd_analyze(config, out, err);
  if (*compare) return cmd_compare(config, system_a, system_b, out, err);
  if (*buckets) return cmd_buckets(config, out, err);
  if (*aggregate) return cmd_aggregate(config, reports, out, err);
  return 2;
}

}  // namespace nereval::cli
