#include "multest/fdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multest {

namespace {

void check_params(const FdpParams& params) {
  if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0,1)");
  }
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  if (params.m < 2) throw std::invalid_argument("m must be >= 2");
}

// floor(gamma * l) with the integer-adjacency guard.
long floor_gamma(double gamma, std::size_t l) {
  return static_cast<long>(
      detail::guarded_floor(gamma * static_cast<double>(l)));
}

// Exceedance count floor(gamma l) + 1 and binomial size
// m - l + floor(gamma(l-1)) + 1 for step l.
struct StepShape {
  long j;  // reject the step when at least j false rejections are possible
  long n;  // binomial trial count
};

StepShape step_shape(const FdpParams& params, std::size_t l) {
  StepShape s;
  s.j = floor_gamma(params.gamma, l) + 1;
  s.n = static_cast<long>(params.m) - static_cast<long>(l) +
        floor_gamma(params.gamma, l - 1) + 1;
  return s;
}

}  // namespace

ThresholdFamily::ThresholdFamily(std::vector<double> thresholds, Kind kind)
    : t_(std::move(thresholds)), kind_(kind) {
  if (t_.empty()) throw std::invalid_argument("threshold family is empty");
  double prev = 0.0;
  for (double v : t_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("threshold outside [0,1]");
    }
    if (v < prev) {
      throw std::invalid_argument("thresholds must be nondecreasing");
    }
    prev = v;
  }
}

ThresholdFamily lr_thresholds(const FdpParams& params) {
  check_params(params);
  std::vector<double> t(params.m);
  for (std::size_t l = 1; l <= params.m; ++l) {
    const StepShape s = step_shape(params, l);  // s.n >= 1 for l <= m
    t[l - 1] = std::min(1.0, params.alpha * static_cast<double>(s.j) /
                                 static_cast<double>(s.n));
  }
  return ThresholdFamily(std::move(t), ThresholdFamily::Kind::lr);
}

ThresholdFamily q_thresholds(const FdpParams& params) {
  check_params(params);
  std::vector<double> t(params.m);
  for (std::size_t l = 1; l <= params.m; ++l) {
    const StepShape s = step_shape(params, l);
    if (s.j > s.n) {
      t[l - 1] = 1.0;  // allowed exceedance count beyond the trial count
      continue;
    }
    const int n = static_cast<int>(s.n);
    const int j = static_cast<int>(s.j);
    double lo = 0.0;  // always feasible: survival is 0 at t = 0
    double hi = 1.0;  // infeasible: survival is 1 at t = 1
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (binomial_survival(n, mid, j) <= params.alpha) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t[l - 1] = lo;  // rounded toward zero: the constraint is never violated
  }
  return ThresholdFamily(std::move(t), ThresholdFamily::Kind::quantile);
}

double h_inverse(double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("h_inverse needs y >= 0");
  if (y == 0.0) return 1.0;
  // Solve e^v - v - 1 = y for v <= 0, then u = e^v. The substitution keeps
  // the bracket well-conditioned when the root is near zero.
  double lo = -(y + 2.0);
  double hi = 0.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * (1.0 + std::abs(lo));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g = std::exp(mid) - mid - 1.0;
    if (g > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

ThresholdFamily hoeffding_bennett_thresholds(const FdpParams& params) {
  check_params(params);
  const ThresholdFamily lr = lr_thresholds(params);
  std::vector<double> t(params.m);
  for (std::size_t l = 1; l <= params.m; ++l) {
    const StepShape s = step_shape(params, l);
    if (s.j > s.n) {
      t[l - 1] = 1.0;
      continue;
    }
    const double n = static_cast<double>(s.n);
    const double j = static_cast<double>(s.j);
    const double log_inv_alpha = std::log(1.0 / params.alpha);
    const double t_ho =
        std::max(0.0, j / n - std::sqrt(log_inv_alpha / (2.0 * n)));
    const double t_be = (j / n) * h_inverse(log_inv_alpha / j);
    t[l - 1] = std::min(1.0, std::max({lr[l], t_ho, t_be}));
  }
  return ThresholdFamily(std::move(t),
                         ThresholdFamily::Kind::hoeffding_bennett);
}

ThresholdFamily gavrilov_thresholds(std::size_t m, double gamma) {
  if (m < 2) throw std::invalid_argument("m must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0,1)");
  }
  std::vector<double> t(m);
  for (std::size_t l = 1; l <= m; ++l) {
    const double ld = static_cast<double>(l);
    t[l - 1] = gamma * ld /
               (static_cast<double>(m) - (1.0 - gamma) * ld + 1.0);
  }
  return ThresholdFamily(std::move(t), ThresholdFamily::Kind::gavrilov);
}

std::size_t step_down_count_select(const std::vector<std::size_t>& counts) {
  std::size_t lhat = 0;
  for (std::size_t l = 1; l < counts.size(); ++l) {
    if (counts[l] >= l) {
      lhat = l;
    } else {
      break;
    }
  }
  return lhat;
}

std::size_t first_violation_index(const std::vector<std::size_t>& counts) {
  const std::size_t m = counts.size() - 1;
  for (std::size_t l = 1; l <= m; ++l) {
    if (counts[l] <= l - 1) return l;
  }
  // convention |R_{m+1}| = |R_m|; the set always contains m+1
  return m + 1;
}

RejectionSet step_down_select(const ThresholdFamily& thresholds,
                              const PValueFamily& family) {
  const std::size_t m = family.size();
  if (thresholds.size() != m) {
    throw std::invalid_argument("threshold family size must equal m");
  }
  std::vector<std::size_t> counts(m + 1, 0);
  for (std::size_t l = 1; l <= m; ++l) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (family[i] <= thresholds[l]) ++c;
    }
    counts[l] = c;
  }
  const std::size_t lhat = step_down_count_select(counts);
  // Conventions R_0 = empty, t_0 = 0; l_hat = 0 forces p_(1) > t_1 >= 0,
  // so threshold 0 rejects nothing.
  const double t = lhat == 0 ? 0.0 : thresholds[lhat];
  return threshold_rejections(family, t);
}

RejectionSet quantile_binomial(const PValueFamily& family, double gamma,
                               double alpha) {
  const FdpParams params{gamma, alpha, family.size()};
  return step_down_select(q_thresholds(params), family);
}

RejectionSet quantile_binomial_recursion(const PValueFamily& family,
                                         double gamma, double alpha) {
  const FdpParams params{gamma, alpha, family.size()};
  check_params(params);
  const std::size_t m = family.size();
  const OrderedPValues ordered(family);
  std::size_t lhat = m;
  for (std::size_t l = 1; l <= m; ++l) {
    const StepShape s = step_shape(params, l);
    const long allowed = s.j - 1;  // floor(gamma l)
    long q = 0;
    if (s.j <= s.n) {
      q = binomial_quantile(static_cast<int>(s.n), ordered.order_stat(l),
                            alpha);
    }
    if (q > allowed) {  // quantile exceeds gamma l: stop, keep l-1 rejections
      lhat = l - 1;
      break;
    }
  }
  RejectionSet out;
  out.indices.reserve(lhat);
  for (std::size_t r = 1; r <= lhat; ++r) {
    out.indices.push_back(ordered.original_index(r));
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.threshold = ordered.order_stat(lhat);
  return out;
}

RejectionSet lehmann_romano(const PValueFamily& family, double gamma,
                            double alpha) {
  const FdpParams params{gamma, alpha, family.size()};
  return step_down_select(lr_thresholds(params), family);
}

std::size_t romano_wolf_select(const std::vector<std::size_t>& sizes,
                               double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0,1)");
  }
  if (sizes.empty()) throw std::invalid_argument("sizes must be nonempty");
  const std::size_t m = sizes.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (sizes[k] > m) {
      throw std::invalid_argument("a procedure size exceeds m");
    }
    if (k > 0 && sizes[k] < sizes[k - 1]) {
      throw std::invalid_argument("sizes must be nondecreasing");
    }
  }
  for (std::size_t k = 1; k <= m + 1; ++k) {
    const std::size_t sk = sizes[std::min(k, m) - 1];  // |S_{m+1}| = |S_m|
    // gamma |S_k| < k - gamma, rewritten with an integer right side so the
    // near-integer snap keeps boundary cases (e.g. gamma = 1/3) consistent
    // with the floor-based selectors.
    const double lhs =
        detail::snap_to_integer(gamma * static_cast<double>(sk + 1));
    if (lhs < static_cast<double>(k)) return k;
  }
  throw std::logic_error("selection rule found no admissible index");
}

}  // namespace multest
