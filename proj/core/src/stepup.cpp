#include "multest/stepup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multest {

namespace {

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
}

// Step-up selection: largest k in {0..m} with p_(k) <= crit[k-1], scanning
// from the top. crit must be nondecreasing for the step-up reading.
std::size_t step_up_index(const OrderedPValues& ordered,
                          const std::vector<double>& crit) {
  for (std::size_t k = ordered.size(); k >= 1; --k) {
    if (ordered.order_stat(k) <= crit[k - 1]) return k;
  }
  return 0;
}

}  // namespace

Pi0Estimator Pi0Estimator::storey(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("storey lambda must lie in (0,1)");
  }
  Pi0Estimator e;
  e.kind_ = Kind::storey;
  e.lambda_ = lambda;
  return e;
}

Pi0Estimator Pi0Estimator::quantile(int k0) {
  if (k0 < 1) throw std::invalid_argument("quantile rank must be >= 1");
  Pi0Estimator e;
  e.kind_ = Kind::quantile;
  e.k0_ = k0;
  return e;
}

Pi0Estimator Pi0Estimator::constant(double f) {
  if (!(f >= 0.0)) throw std::invalid_argument("constant must be >= 0");
  Pi0Estimator e;
  e.kind_ = Kind::constant;
  e.value_ = f;
  return e;
}

double Pi0Estimator::evaluate(const PValueFamily& family) const {
  switch (kind_) {
    case Kind::storey:
      return storey_estimator(family, lambda_);
    case Kind::quantile:
      return quantile_estimator(family, k0_);
    case Kind::constant:
      return value_;
  }
  throw std::logic_error("unreachable");
}

double RejectionCurve::critical_value(std::size_t k, std::size_t m) const {
  if (k < 1 || k > m) throw std::invalid_argument("rank out of range");
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  switch (kind) {
    case Kind::blanchard_roquain:
      // r_alpha(t) = (1 + 1/m) t / (t + alpha(1-alpha)) for t <= alpha,
      // +infinity beyond; inverting at k/m and capping at alpha gives
      return std::min(alpha, alpha * kd * (1.0 - alpha) / (md + 1.0 - kd));
    case Kind::aorc:
      // r_alpha(t) = t / (alpha + t(1-alpha)); at k = m the denominator
      // reduces to m alpha, so c_m is exactly 1.
      if (k == m) return 1.0;
      return alpha * kd / (md - kd * (1.0 - alpha));
  }
  throw std::logic_error("unreachable");
}

BetaWeights::BetaWeights(std::vector<double> nu) : nu_(std::move(nu)) {
  if (nu_.empty()) throw std::invalid_argument("weights must be nonempty");
  double sum = 0.0;
  for (double v : nu_) {
    if (!(v >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1 within 1e-9");
  }
}

BetaWeights BetaWeights::benjamini_yekutieli(std::size_t m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  double delta = 0.0;
  for (std::size_t i = 1; i <= m; ++i) delta += 1.0 / static_cast<double>(i);
  std::vector<double> nu(m);
  for (std::size_t i = 1; i <= m; ++i) {
    nu[i - 1] = 1.0 / (static_cast<double>(i) * delta);
  }
  // Normalize away the last-ulp drift so the sum check is exact enough.
  double sum = 0.0;
  for (double v : nu) sum += v;
  for (double& v : nu) v /= sum;
  return BetaWeights(std::move(nu));
}

std::vector<double> BetaWeights::critical_values(double alpha) const {
  check_level(alpha);
  const std::size_t m = nu_.size();
  std::vector<double> crit(m);
  double acc = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    acc += alpha * static_cast<double>(j) / static_cast<double>(m) * nu_[j - 1];
    crit[j - 1] = acc;
  }
  return crit;
}

bool is_self_consistent(double t, const PValueFamily& family, double alpha) {
  check_level(alpha);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("threshold outside [0,1]");
  }
  return ecdf(family, t) >= t / alpha;
}

double self_consistent_threshold_max(const PValueFamily& family,
                                     double alpha) {
  check_level(alpha);
  const std::size_t m = family.size();
  double best = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    const double u = alpha * static_cast<double>(k) / static_cast<double>(m);
    if (u > 1.0) break;
    // The crossing condition ecdf(u) >= u/alpha is evaluated through the
    // switching relation (count >= k), which is exact where the float
    // round-trip u/alpha can miss the grid point by one ulp.
    std::size_t count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (family[i] <= u) ++count;
    }
    if (count >= k) best = u;
  }
  return best;
}

RejectionSet linear_step_up(const PValueFamily& family, double alpha) {
  check_level(alpha);
  const std::size_t m = family.size();
  const OrderedPValues ordered(family);
  std::vector<double> crit(m);
  for (std::size_t k = 1; k <= m; ++k) {
    crit[k - 1] = alpha * static_cast<double>(k) / static_cast<double>(m);
  }
  const std::size_t khat = step_up_index(ordered, crit);
  const double t = khat == 0 ? 0.0 : crit[khat - 1];
  return threshold_rejections(family, t);
}

double storey_estimator(const PValueFamily& family, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in (0,1)");
  }
  const std::size_t m = family.size();
  std::size_t exceed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (family[i] > lambda) ++exceed;
  }
  return static_cast<double>(m) * (1.0 - lambda) /
         static_cast<double>(exceed + 1);
}

double quantile_estimator(const PValueFamily& family, int k0) {
  const std::size_t m = family.size();
  if (k0 < 1 || static_cast<std::size_t>(k0) > m) {
    throw std::invalid_argument("k0 must lie in {1..m}");
  }
  const OrderedPValues ordered(family);
  const double pk0 = ordered.order_stat(static_cast<std::size_t>(k0));
  return static_cast<double>(m) * (1.0 - pk0) /
         static_cast<double>(m - static_cast<std::size_t>(k0) + 1);
}

RejectionSet adaptive_step_up(const PValueFamily& family, double alpha,
                              const Pi0Estimator& estimator) {
  check_level(alpha);
  const std::size_t m = family.size();
  const double f = estimator.evaluate(family);
  const OrderedPValues ordered(family);
  std::vector<double> crit(m);
  for (std::size_t k = 1; k <= m; ++k) {
    crit[k - 1] = std::min(
        1.0, alpha * f * static_cast<double>(k) / static_cast<double>(m));
  }
  const std::size_t khat = step_up_index(ordered, crit);
  const double t = khat == 0 ? 0.0 : crit[khat - 1];
  return threshold_rejections(family, t);
}

RejectionSet one_stage_step_up(const PValueFamily& family,
                               const RejectionCurve& curve) {
  check_level(curve.alpha);
  const std::size_t m = family.size();
  const OrderedPValues ordered(family);
  std::vector<double> crit(m);
  for (std::size_t k = 1; k <= m; ++k) {
    crit[k - 1] = curve.critical_value(k, m);
  }
  const std::size_t khat = step_up_index(ordered, crit);
  const double t = khat == 0 ? 0.0 : crit[khat - 1];
  RejectionSet out = threshold_rejections(family, t);
  if (curve.kind == RejectionCurve::Kind::aorc && khat == m) {
    out.warning = "aorc-degenerate";
  }
  return out;
}

RejectionSet beta_step_up(const PValueFamily& family, double alpha,
                          const BetaWeights& weights) {
  check_level(alpha);
  if (weights.size() != family.size()) {
    throw std::invalid_argument("weights length must equal m");
  }
  const OrderedPValues ordered(family);
  const std::vector<double> crit = weights.critical_values(alpha);
  const std::size_t khat = step_up_index(ordered, crit);
  // k_hat = 0 forces p_(1) > beta(alpha/m) >= 0, so threshold 0 rejects
  // nothing and the set invariant is preserved.
  const double t = khat == 0 ? 0.0 : crit[khat - 1];
  return threshold_rejections(family, t);
}

RejectionSet benjamini_yekutieli(const PValueFamily& family, double alpha) {
  return beta_step_up(family, alpha,
                      BetaWeights::benjamini_yekutieli(family.size()));
}

double aggregate_pvalues(const PValueFamily& family, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in (0,1]");
  }
  const std::size_t m = family.size();
  const double raw = gamma * static_cast<double>(m);
  auto rank = static_cast<std::size_t>(detail::guarded_ceil(raw));
  rank = std::min(std::max<std::size_t>(rank, 1), m);
  const OrderedPValues ordered(family);
  return std::min(ordered.order_stat(rank) / gamma, 1.0);
}

}  // namespace multest
