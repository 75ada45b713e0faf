#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "nereval/error.hpp"
#include "nereval/stats.hpp"
#include "support.hpp"

using namespace nereval;
using namespace nereval::stats;
using doctest::Approx;

namespace {

using Pairs = std::vector<std::pair<double, double>>;

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("tied ranks") {
  CHECK(rank_with_ties(v({10, 20, 20, 30})) == v({1, 2.5, 2.5, 4}));
  CHECK(rank_with_ties(v({3, 4, 9})) == v({1, 2, 3}));
  CHECK(rank_with_ties(v({7, 7, 7, 7, 7})) == v({3, 3, 3, 3, 3}));
  CHECK(tie_term(v({1, 1, 2, 3, 3, 3})) == 6 + 24);
}

TEST_CASE("spearman examples") {
  auto a = v({1, 2, 3, 4, 5});
  CHECK(*spearman_rho(a, a) == Approx(1.0));
  CHECK(*spearman_rho(a, v({5, 4, 3, 2, 1})) == Approx(-1.0));
  CHECK(*spearman_rho(a, v({2, 1, 4, 3, 5})) == Approx(0.8).epsilon(1e-12));
  CHECK_FALSE(spearman_rho(a, v({2, 2, 2, 2, 2})));
  CHECK_THROWS_AS(spearman_rho(v({1, 2}), v({1, 2})), Error);
}

TEST_CASE("spearman on random tied vectors equals pearson on count ranks") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 12;
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = static_cast<double>(rng() % 5);
    for (auto& x : b) x = static_cast<double>(rng() % 5);
    auto rho = spearman_rho(a, b);
    const double expected =
        testing::plain_pearson(testing::count_ranks(a), testing::count_ranks(b));
    if (!rho) {
      CHECK(std::isnan(expected));
      continue;
    }
    CHECK(std::abs(*rho - expected) <= 1e-10);
    CHECK(std::abs(*rho - *spearman_rho(b, a)) <= 1e-15);

    // Strictly increasing transforms leave the coefficient unchanged.
    std::vector<double> ta;
    for (double x : a) ta.push_back(std::exp(x) + 3.0);
    CHECK(std::abs(*spearman_rho(ta, b) - *rho) <= 1e-12);
  }
}

TEST_CASE("chi-square survival against boost") {
  CHECK(chi_square_sf(0, 3) == 1.0);
  CHECK(chi_square_sf(1e4, 3) < 1e-300);
  CHECK(std::abs(chi_square_sf(3.841, 1) - 0.05) <= 5e-4);
  for (double df : {1.0, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0, 25.0}) {
    double previous = 1.0;
    for (double x = 0.05; x < 80.0; x *= 1.3) {
      const double ours = chi_square_sf(x, df);
      const double oracle = boost::math::gamma_q(df / 2.0, x / 2.0);
      CHECK(std::abs(ours - oracle) <= 1e-10);
      CHECK(ours <= previous);
      previous = ours;
      CHECK(chi_square_sf(x, df + 1.0) >= ours);
    }
  }
}

TEST_CASE("friedman examples") {
  std::vector<std::vector<double>> agree(6, v({0.1, 0.2, 0.3, 0.4}));
  auto r = friedman_test(agree);
  CHECK(r.statistic == Approx(18.0).epsilon(1e-12));
  CHECK(std::abs(r.p_value - 4.1e-4) <= 5e-5);
  CHECK(r.n == 6);
  CHECK(r.k == 4);

  std::vector<std::vector<double>> flat(5, v({0.5, 0.5, 0.5}));
  auto none = friedman_test(flat);
  CHECK(none.statistic == 0.0);
  CHECK(none.p_value == 1.0);

  CHECK_THROWS_AS(friedman_test({v({1, 2}), v({1, 2})}), Error);
  CHECK_THROWS_AS(friedman_test({v({1, 2, 3})}), Error);
}

TEST_CASE("friedman tie correction") {
  std::vector<std::vector<double>> s{v({1, 3, 2}), v({1, 3, 2}), v({2, 2, 1})};
  auto r = friedman_test(s);
  // Ranks: [1,3,2], [1,3,2], [2.5,2.5,1] -> sums 4.5, 8.5, 5.
  const double spread = std::pow(4.5 / 3 - 2, 2) + std::pow(8.5 / 3 - 2, 2) + std::pow(5.0 / 3 - 2, 2);
  const double raw = 12.0 * 3 / (3 * 4) * spread;
  const double correction = 1.0 - 6.0 / (3 * 3 * 8);
  CHECK(r.statistic == Approx(raw / correction).epsilon(1e-12));
}

TEST_CASE("friedman is invariant under per-block monotone transforms") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> s(2 + rng() % 6, std::vector<double>(3 + rng() % 4));
    for (auto& block : s) {
      for (auto& x : block) x = static_cast<double>(rng() % 6) / 5.0;
    }
    auto t = s;
    for (auto& block : t) {
      const double scale = 1.0 + rng() % 5;
      for (auto& x : block) x = scale * x * x * x + 2.0;
    }
    CHECK(friedman_test(s).statistic == Approx(friedman_test(t).statistic).epsilon(1e-12));
  }
}

TEST_CASE("wilcoxon examples") {
  Pairs same{{0.5, 0.5}, {0.2, 0.2}};
  auto zero = wilcoxon_signed_rank(same);
  CHECK(zero.all_zero);
  CHECK(zero.p_value == 1.0);

  Pairs positive;
  for (int i = 1; i <= 6; ++i) positive.push_back({i + 1.0 + i * 0.1, 1.0});
  auto r = wilcoxon_signed_rank(positive);
  CHECK(r.method == Method::kExact);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == Approx(0.03125).epsilon(1e-15));
}

TEST_CASE("exact wilcoxon equals sign enumeration") {
  std::mt19937 rng(17);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 15; ++trial) {
      Pairs pairs;
      for (std::size_t i = 0; i < n; ++i) {
        // Coarse values give zeros and tied magnitudes.
        pairs.push_back({static_cast<double>(rng() % 5), static_cast<double>(rng() % 5)});
      }
      auto r = wilcoxon_signed_rank(pairs);
      if (r.all_zero) continue;
      CHECK(std::abs(r.p_value - testing::enumerate_wilcoxon_p(pairs)) <= 1e-12);
    }
  }
}

TEST_CASE("wilcoxon normal approximation beyond the exact limit") {
  Pairs pairs;
  for (int i = 0; i < 40; ++i) pairs.push_back({static_cast<double>(i % 7), static_cast<double>((i * 3) % 5)});
  auto r = wilcoxon_signed_rank(pairs);
  CHECK(r.method == Method::kApproximate);
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);

  // At n = 20 both paths exist; the approximation should be close.
  Pairs twenty;
  for (int i = 1; i <= 20; ++i) twenty.push_back({static_cast<double>(i) * (i % 3 ? 1 : -1), 0.0});
  auto exact = wilcoxon_signed_rank(twenty);
  CHECK(exact.method == Method::kExact);
  twenty.push_back({21.0, 0.0});
  auto approx = wilcoxon_signed_rank(twenty);
  CHECK(approx.method == Method::kApproximate);
  CHECK(std::abs(exact.p_value - approx.p_value) < 0.1);
}

TEST_CASE("normal tail") {
  CHECK(normal_sf(0) == Approx(0.5));
  CHECK(normal_sf(1.959963984540054) == Approx(0.025).epsilon(1e-12));
}

}  // TEST_SUITE
