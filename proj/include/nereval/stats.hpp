#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nereval::stats {

enum class Method { kExact, kApproximate };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;  // blocks (Friedman) or non-zero pairs (Wilcoxon)
  std::size_t k = 0;  // treatments (Friedman); 0 otherwise
  Method method = Method::kApproximate;
  bool all_zero = false;  // Wilcoxon: every difference was zero
};

// Ascending ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> rank_with_ties(std::span<const double> values);

// Sum over tie groups of (t^3 - t).
double tie_term(std::span<const double> values);

double pearson(std::span<const double> a, std::span<const double> b);

// Pearson correlation of the tied ranks. Requires |a| == |b| >= 3; returns
// std::nullopt when either side has no rank variance.
std::optional<double> spearman_rho(std::span<const double> a, std::span<const double> b);

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution.
double chi_square_sf(double x, double df);

// Standard normal upper tail.
double normal_sf(double z);

// scores[block][treatment]. Ranks within each block, applies the tie
// correction, and refers the statistic to chi-square with k - 1 degrees of
// freedom. Throws Error(kTooFewTreatments) for k < 3, Error(kTooFewBlocks)
// for n < 2.
TestResult friedman_test(const std::vector<std::vector<double>>& scores);

// Largest effective n answered by exact enumeration.
inline constexpr std::size_t kWilcoxonExactLimit = 20;

// Two-sided signed-rank test on (x, y) pairs. Zero differences are dropped,
// the statistic is min(W+, W-).
TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

}  // namespace nereval::stats
