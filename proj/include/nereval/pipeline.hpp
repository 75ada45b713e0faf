#pragma once

#include <cstddef>

#include "nereval/analysis.hpp"
#include "nereval/report.hpp"

namespace nereval {

struct EvaluationOptions {
  TensorOptions tensor;
  double alpha = 0.05;
  bool all_pairs = true;  // comparative diagnosis for every system pair
};

// Wilcoxon tests accompany the max- and min-gap bucket of every attribute.
Comparison compare_systems(const AttributeContext& ctx, const PerformanceTensor& tensor,
                           std::size_t a, std::size_t b, double alpha);

// Tensor, model-, attribute- and bucket-wise analyses for one test set. A
// precomputed tensor (for example loaded from disk) may be passed in.
ReportBundle evaluate(const AttributeContext& ctx, const EvaluationOptions& options,
                      const PerformanceTensor* precomputed = nullptr);

}  // namespace nereval
