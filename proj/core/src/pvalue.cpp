#include "multest/pvalue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multest {

double normal_upper_tail(double x) {
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

NullTail NullTail::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("sd must be positive");
  NullTail t;
  t.tail_fn_ = [mean, sd](double s) {
    return normal_upper_tail((s - mean) / sd);
  };
  return t;
}

NullTail NullTail::discrete_uniform(int n) {
  if (n < 1) throw std::invalid_argument("support size must be >= 1");
  std::vector<double> points(n), weights(n, 1.0);
  for (int i = 0; i < n; ++i) points[i] = i + 1;
  return discrete(std::move(points), std::move(weights));
}

NullTail NullTail::poisson(double lambda, double tail_eps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  std::vector<double> points, weights;
  double pmf = std::exp(-lambda);  // P(X = 0)
  double mass = 0.0;
  for (int x = 0; mass < 1.0 - tail_eps; ++x) {
    points.push_back(x);
    weights.push_back(pmf);
    mass += pmf;
    pmf *= lambda / (x + 1);
  }
  return discrete(std::move(points), std::move(weights));
}

NullTail NullTail::discrete(std::vector<double> points,
                            std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("bad discrete support");
  }
  if (std::adjacent_find(points.begin(), points.end(), [](double a, double b) {
        return !(a < b);
      }) != points.end()) {
    throw std::invalid_argument("support points must be strictly increasing");
  }
  DiscreteSupport sup;
  sup.points = std::move(points);
  sup.weights = std::move(weights);
  for (double w : sup.weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    sup.total += w;
  }
  NullTail t;
  t.support_ = std::move(sup);
  return t;
}

NullTail NullTail::continuous(std::function<double(double)> upper_tail) {
  if (!upper_tail) throw std::invalid_argument("missing tail function");
  NullTail t;
  t.tail_fn_ = std::move(upper_tail);
  return t;
}

const DiscreteSupport& NullTail::support() const {
  if (!support_) throw std::logic_error("continuous null has no support");
  return *support_;
}

double NullTail::upper_tail(double s) const {
  if (!support_) return tail_fn_(s);
  // Suffix weight of atoms >= s, summed from the top so that equal-weight
  // supports give exact ratios.
  const auto& sup = *support_;
  double acc = 0.0;
  for (std::size_t j = sup.points.size(); j-- > 0;) {
    if (sup.points[j] < s) break;
    acc += sup.weights[j];
  }
  return acc / sup.total;
}

double pvalue_from_statistic(double s, const CompositeNull& null) {
  if (null.empty()) {
    throw std::invalid_argument("composite null must be nonempty");
  }
  double p = 0.0;
  for (const auto& tail : null) p = std::max(p, tail.upper_tail(s));
  return std::min(p, 1.0);
}

double pvalue_cdf(const NullTail& null, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("u outside [0,1]");
  }
  if (!null.is_discrete()) return u;
  const auto& sup = null.support();
  double matched = 0.0;
  for (std::size_t j = 0; j < sup.points.size(); ++j) {
    if (null.upper_tail(sup.points[j]) <= u) matched += sup.weights[j];
  }
  return matched / sup.total;
}

bool superuniformity_grid_check(const NullTail& null,
                                std::span<const double> grid) {
  for (double u : grid) {
    if (pvalue_cdf(null, u) > u) return false;
  }
  return true;
}

}  // namespace multest
