#include "multest/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace multest {

namespace {

void check_args(int n, double t) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("success probability outside [0,1]");
  }
}

double log_choose(int n, int j) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
         std::lgamma(n - j + 1.0);
}

}  // namespace

double binomial_pmf(int n, double t, int j) {
  check_args(n, t);
  if (j < 0 || j > n) return 0.0;
  if (t == 0.0) return j == 0 ? 1.0 : 0.0;
  if (t == 1.0) return j == n ? 1.0 : 0.0;
  return std::exp(log_choose(n, j) + j * std::log(t) +
                  (n - j) * std::log1p(-t));
}

double binomial_cdf(int n, double t, int j) {
  check_args(n, t);
  if (j < 0) return 0.0;
  if (j >= n) return 1.0;
  double acc = 0.0;
  for (int i = 0; i <= j; ++i) acc += binomial_pmf(n, t, i);
  return acc < 1.0 ? acc : 1.0;
}

double binomial_survival(int n, double t, int j) {
  check_args(n, t);
  if (j <= 0) return 1.0;
  if (j > n) return 0.0;
  double acc = 0.0;
  for (int i = j; i <= n; ++i) acc += binomial_pmf(n, t, i);
  return acc < 1.0 ? acc : 1.0;
}

int binomial_quantile(int n, double t, double alpha) {
  check_args(n, t);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (t == 0.0) return 0;
  if (t == 1.0) return n;
  const double target = 1.0 - alpha;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += binomial_pmf(n, t, j);
    if (acc >= target) return j;
  }
  return n;
}

}  // namespace multest
