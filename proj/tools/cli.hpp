#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nereval/pipeline.hpp"

namespace nereval::cli {

// Everything a run needs; filled from flags, then a config file, then defaults.
struct RunConfig {
  std::string train_path;
  std::string test_path;
  std::vector<std::string> predictions;  // NAME=PATH or NAME=col:N
  std::string scheme = "bio";
  std::vector<std::string> attributes;   // empty selects all
  std::vector<std::string> buckets;      // "N" or "attr=N"
  double alpha = 0.05;
  std::string out_dir;
  std::vector<std::string> formats{"json", "md"};
  std::string stats_path;
  std::string plan_path;
  std::string tensor_path;
  bool lowercase = false;
  std::size_t token_column = 0;
  std::size_t gold_column = 1;
};

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, const std::string& system_a, const std::string& system_b,
                std::ostream& out, std::ostream& err);
int cmd_buckets(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_aggregate(const RunConfig& config, const std::vector<std::string>& reports, std::ostream& out,
                  std::ostream& err);

// Parses argv and dispatches to a subcommand. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nereval::cli
