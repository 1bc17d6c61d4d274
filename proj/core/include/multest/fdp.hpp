#ifndef MULTEST_FDP_HPP
#define MULTEST_FDP_HPP

#include <vector>

#include "multest/binomial.hpp"
#include "multest/core.hpp"

namespace multest {

/// Parameters of an FDP-exceedance procedure: bound P(FDP > gamma) by alpha
/// over m hypotheses.
struct FdpParams {
  double gamma = 0.1;
  double alpha = 0.05;
  std::size_t m = 2;
};

/// A nondecreasing family of thresholds t_1 <= ... <= t_m in [0,1]; the
/// induced rejection sets R_l = {i : p_i <= t_l} are then nondecreasing
/// in l, which the step-down selection requires.
class ThresholdFamily {
 public:
  enum class Kind { lr, quantile, hoeffding_bennett, gavrilov, custom };

  ThresholdFamily(std::vector<double> thresholds, Kind kind = Kind::custom);

  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t l) const { return t_[l - 1]; }  // 1-based
  const std::vector<double>& values() const { return t_; }
  Kind kind() const { return kind_; }

 private:
  std::vector<double> t_;
  Kind kind_;
};

/// Markov-bound thresholds
/// t_l = alpha (floor(gamma l)+1) / (m - l + floor(gamma(l-1)) + 1),
/// capped at 1. Valid for arbitrary dependence between null and
/// alternative-independent p-values.
ThresholdFamily lr_thresholds(const FdpParams& params);

/// Exact-binomial thresholds: the largest t with
/// P(Z >= floor(gamma l)+1) <= alpha for Z ~ Binomial(m-l+floor(gamma(l-1))+1, t),
/// solved by bisection to 1e-12 and rounded toward zero so the constraint is
/// never violated. Valid under independence.
ThresholdFamily q_thresholds(const FdpParams& params);

/// Closed-form improvements of the Markov thresholds via the Hoeffding and
/// Bennett deviation bounds: elementwise max(t_lr, t_ho, t_be).
ThresholdFamily hoeffding_bennett_thresholds(const FdpParams& params);

/// Comparison curve t_l = gamma l / (m - (1-gamma) l + 1); exported for
/// threshold tables only, no exceedance guarantee claimed here.
ThresholdFamily gavrilov_thresholds(std::size_t m, double gamma);

/// Inverse of h(u) = u - log(u) - 1 on (0,1], for y >= 0.
double h_inverse(double y);

/// Largest l in {0..m} such that |R_l'| >= l' for every l' <= l, given the
/// rejection counts |R_l| (index 0 unused, counts[l] = |R_l|).
std::size_t step_down_count_select(const std::vector<std::size_t>& counts);

/// First violation index: min{l in {1..m+1} : |R_l| <= l-1}, with the
/// convention |R_{m+1}| = |R_m|. Equals step_down_count_select + 1.
std::size_t first_violation_index(const std::vector<std::size_t>& counts);

/// Step-down selection over a threshold family: returns R_{l_hat} where
/// l_hat is the largest l whose prefix satisfies |R_l'| >= l'.
RejectionSet step_down_select(const ThresholdFamily& thresholds,
                              const PValueFamily& family);

/// FDP-exceedance procedure from the exact-binomial thresholds.
RejectionSet quantile_binomial(const PValueFamily& family, double gamma,
                               double alpha);

/// Same procedure expressed as the explicit quantile recursion: stop at the
/// first l where the (1-alpha)-quantile of
/// Binomial(m-l+floor(gamma(l-1))+1, p_(l)) exceeds gamma l.
RejectionSet quantile_binomial_recursion(const PValueFamily& family,
                                         double gamma, double alpha);

/// FDP-exceedance procedure from the Markov-bound thresholds.
RejectionSet lehmann_romano(const PValueFamily& family, double gamma,
                            double alpha);

/// Selection rule over a family of k-FWER procedures with nondecreasing
/// sizes |S_1| <= ... <= |S_m| (convention |S_{m+1}| = |S_m|):
/// k_hat = min{k in {1..m+1} : gamma |S_k| < k - gamma}.
std::size_t romano_wolf_select(const std::vector<std::size_t>& sizes,
                               double gamma);

}  // namespace multest

#endif  // MULTEST_FDP_HPP
