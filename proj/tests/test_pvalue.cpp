#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "multest/pvalue.hpp"
#include "multest/rng.hpp"

using multest::CompositeNull;
using multest::NullTail;
using multest::pvalue_cdf;
using multest::pvalue_from_statistic;
using multest::superuniformity_grid_check;

namespace {

std::vector<double> linspace_grid(int n) {
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) / n;
  return grid;
}

// F^-1(v) = min{s in support : F(s) >= v} for a finite support.
double finite_quantile(const NullTail& tail, double v) {
  const auto& sup = tail.support();
  double cum = 0.0;
  for (std::size_t j = 0; j < sup.points.size(); ++j) {
    cum += sup.weights[j] / sup.total;
    if (cum >= v) return sup.points[j];
  }
  return sup.points.back();
}

}  // namespace

TEST_CASE("standard normal tail at zero") {
  const CompositeNull null{NullTail::normal()};
  CHECK(pvalue_from_statistic(0.0, null) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(multest::normal_upper_tail(1.959963984540054) ==
        doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("discrete uniform support gives (n+1-x)/n") {
  const CompositeNull null{NullTail::discrete_uniform(10)};
  CHECK(pvalue_from_statistic(9.0, null) == 0.2);
  CHECK(pvalue_from_statistic(1.0, null) == 1.0);
  CHECK(pvalue_from_statistic(10.0, null) == 0.1);
  CHECK(pvalue_from_statistic(11.0, null) == 0.0);
}

TEST_CASE("composite null takes the pointwise max of the tails") {
  const NullTail a = NullTail::normal(0.0);
  const NullTail b = NullTail::normal(-1.0);
  const CompositeNull both{a, b};
  multest::PhiloxStream rng(77, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double s = 8.0 * (rng.next_uniform() - 0.5);
    const double expected = std::max(a.upper_tail(s), b.upper_tail(s));
    CHECK(pvalue_from_statistic(s, both) == expected);
  }
}

TEST_CASE("empty composite null is rejected") {
  CHECK_THROWS_AS(pvalue_from_statistic(0.0, CompositeNull{}),
                  std::invalid_argument);
}

TEST_CASE("p-value is nonincreasing in the statistic") {
  const CompositeNull null{NullTail::normal(), NullTail::poisson(3.0)};
  double prev = 1.0;
  for (double s = -4.0; s <= 12.0; s += 0.25) {
    const double p = pvalue_from_statistic(s, null);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("discrete uniform: equality exactly at the achievable points") {
  const NullTail tail = NullTail::discrete_uniform(10);
  for (int i = 1; i <= 10; ++i) {
    const double u = i / 10.0;
    CHECK(pvalue_cdf(tail, u) == u);  // exact, not approximate
  }
  // strictly below u between achievable points
  for (int i = 0; i < 10; ++i) {
    const double u = i / 10.0 + 0.05;
    CHECK(pvalue_cdf(tail, u) < u);
  }
  CHECK(superuniformity_grid_check(tail, linspace_grid(1000)));
}

TEST_CASE("continuous null is exactly uniform on the grid") {
  const NullTail tail = NullTail::normal();
  for (double u : linspace_grid(57)) {
    CHECK(pvalue_cdf(tail, u) == u);
  }
  CHECK(superuniformity_grid_check(tail, linspace_grid(100)));
}

TEST_CASE("truncated Poisson null is super-uniform") {
  const NullTail tail = NullTail::poisson(3.0);
  CHECK(superuniformity_grid_check(tail, linspace_grid(100)));
  CHECK(superuniformity_grid_check(tail, linspace_grid(9973)));
}

TEST_CASE("discrete rejection duality: p(x) <= alpha iff x >= F^-1(1-alpha)+1") {
  for (const NullTail& tail :
       {NullTail::discrete_uniform(10), NullTail::poisson(3.0)}) {
    const auto& sup = tail.support();
    for (int ai = 0; ai < 40; ++ai) {
      // odd eightieths: never on an atom of either support's tail grid
      const double alpha = (2 * ai + 1) / 80.0;
      const double cut = finite_quantile(tail, 1.0 - alpha) + 1.0;
      for (double x : sup.points) {
        const bool by_pvalue = tail.upper_tail(x) <= alpha;
        const bool by_statistic = x >= cut;
        CHECK(by_pvalue == by_statistic);
      }
    }
  }
}

TEST_CASE("support validation") {
  CHECK_THROWS_AS(NullTail::discrete({1.0, 1.0}, {0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NullTail::discrete({1.0, 2.0}, {0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NullTail::discrete({1.0, 2.0}, {0.5, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NullTail::discrete_uniform(0), std::invalid_argument);
}
