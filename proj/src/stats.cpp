#include "nereval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "nereval/error.hpp"

namespace nereval::stats {

std::vector<double> rank_with_ties(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double mean_rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mean_rank;
    i = j;
  }
  return ranks;
}

double tie_term(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "spearman: length mismatch");
  }
  if (a.size() < 3) {
    throw Error(ErrorKind::kInsufficientBuckets, "spearman: need at least 3 observations");
  }
  const auto ra = rank_with_ties(a);
  const auto rb = rank_with_ties(b);
  const double rho = pearson(ra, rb);
  if (std::isnan(rho)) return std::nullopt;
  return rho;
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIterations = 100000;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction; used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
    throw Error(ErrorKind::kInvalidArgument, "incomplete gamma: need a > 0 and x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::kInvalidArgument, "chi-square: df must be positive");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

TestResult friedman_test(const std::vector<std::vector<double>>& scores) {
  const std::size_t n = scores.size();
  const std::size_t k = n == 0 ? 0 : scores.front().size();
  if (k < 3) throw Error(ErrorKind::kTooFewTreatments, "friedman: need at least 3 treatments");
  if (n < 2) throw Error(ErrorKind::kTooFewBlocks, "friedman: need at least 2 blocks");

  std::vector<double> rank_sums(k, 0.0);
  double ties = 0.0;
  for (const auto& block : scores) {
    if (block.size() != k) {
      throw Error(ErrorKind::kInvalidArgument, "friedman: ragged score matrix");
    }
    const auto ranks = rank_with_ties(block);
    for (std::size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    ties += tie_term(block);
  }

  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  double spread = 0.0;
  for (double r : rank_sums) {
    const double dev = r / nd - (kd + 1.0) / 2.0;
    spread += dev * dev;
  }
  const double correction = 1.0 - ties / (nd * kd * (kd * kd - 1.0));

  TestResult out;
  out.n = n;
  out.k = k;
  out.method = Method::kApproximate;
  if (correction <= 0.0) {
    // Every block constant: no evidence against equal treatments.
    out.statistic = 0.0;
    out.p_value = 1.0;
    return out;
  }
  out.statistic = 12.0 * nd / (kd * (kd + 1.0)) * spread / correction;
  out.p_value = chi_square_sf(out.statistic, kd - 1.0);
  return out;
}

TestResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> diffs;
  for (const auto& [x, y] : pairs) {
    if (x - y != 0.0) diffs.push_back(x - y);
  }
  TestResult out;
  out.n = diffs.size();
  if (diffs.empty()) {
    out.all_zero = true;
    out.method = Method::kExact;
    return out;
  }

  std::vector<double> magnitudes;
  magnitudes.reserve(diffs.size());
  for (double d : diffs) magnitudes.push_back(std::abs(d));
  const auto ranks = rank_with_ties(magnitudes);

  double w_plus = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    total += ranks[i];
    if (diffs[i] > 0) w_plus += ranks[i];
  }
  const double w_minus = total - w_plus;
  out.statistic = std::min(w_plus, w_minus);

  if (diffs.size() <= kWilcoxonExactLimit) {
    // Tied ranks are multiples of 1/2, so doubled ranks are integers and the
    // null distribution of 2W+ can be counted exactly.
    std::vector<std::size_t> doubled;
    std::size_t sum2 = 0;
    for (double r : ranks) {
      doubled.push_back(static_cast<std::size_t>(std::lround(2.0 * r)));
      sum2 += doubled.back();
    }
    std::vector<double> counts(sum2 + 1, 0.0);
    counts[0] = 1.0;
    std::size_t reach = 0;
    for (auto r : doubled) {
      for (std::size_t w = reach + 1; w-- > 0;) {
        if (counts[w] != 0.0) counts[w + r] += counts[w];
      }
      reach += r;
    }
    const auto observed = static_cast<std::int64_t>(std::lround(2.0 * w_plus));
    const auto center2 = static_cast<std::int64_t>(sum2);  // 2 * (2 * mean)
    const std::int64_t observed_dev = std::abs(2 * observed - center2);
    double extreme = 0.0;
    for (std::size_t w = 0; w <= sum2; ++w) {
      if (std::abs(2 * static_cast<std::int64_t>(w) - center2) >= observed_dev) {
        extreme += counts[w];
      }
    }
    out.p_value = std::min(1.0, extreme / std::ldexp(1.0, static_cast<int>(diffs.size())));
    out.method = Method::kExact;
    return out;
  }

  const auto n = static_cast<double>(diffs.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
  const double deviation = std::max(0.0, std::abs(w_plus - mean) - 0.5);
  out.p_value = variance > 0.0 ? std::min(1.0, 2.0 * normal_sf(deviation / std::sqrt(variance)))
                               : 1.0;
  out.method = Method::kApproximate;
  return out;
}

}  // namespace nereval::stats
