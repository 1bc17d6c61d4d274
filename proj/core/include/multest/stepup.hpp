#ifndef MULTEST_STEPUP_HPP
#define MULTEST_STEPUP_HPP

#include <vector>

#include "multest/core.hpp"

namespace multest {

/// Estimator of the reciprocal null proportion 1/pi0 used by the adaptive
/// step-up procedure.
class Pi0Estimator {
 public:
  enum class Kind { storey, quantile, constant };

  /// m(1-lambda) / (#{p_i > lambda} + 1), lambda in (0,1).
  static Pi0Estimator storey(double lambda);
  /// m(1-p_(k0)) / (m-k0+1), k0 a rank in {1, ..., m}.
  static Pi0Estimator quantile(int k0);
  /// A fixed value f >= 0.
  static Pi0Estimator constant(double f);

  double evaluate(const PValueFamily& family) const;

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  int k0() const { return k0_; }
  double value() const { return value_; }

 private:
  Kind kind_ = Kind::constant;
  double lambda_ = 0.5;
  int k0_ = 1;
  double value_ = 1.0;
};

/// One-stage adaptive rejection curves: step-up critical values are obtained
/// by inverting the curve at k/m.
struct RejectionCurve {
  enum class Kind { blanchard_roquain, aorc };
  Kind kind = Kind::blanchard_roquain;
  double alpha = 0.05;

  /// Critical value c_k = sup{t : r_alpha(t) <= k/m}, k in {1, ..., m}.
  double critical_value(std::size_t k, std::size_t m) const;
};

/// Nonnegative spending weights nu_1..nu_m summing to 1 (within 1e-9); they
/// define the shape function behind the arbitrary-dependence step-up.
class BetaWeights {
 public:
  explicit BetaWeights(std::vector<double> nu);

  /// Uniform-over-ranks weights give the Benjamini-Yekutieli shape.
  static BetaWeights benjamini_yekutieli(std::size_t m);

  std::size_t size() const { return nu_.size(); }
  const std::vector<double>& nu() const { return nu_; }

  /// beta(alpha k / m) = sum_{j <= k} (alpha j / m) nu_j; beta(u) <= u.
  std::vector<double> critical_values(double alpha) const;

 private:
  std::vector<double> nu_;
};

/// True iff t is self-consistent at level alpha: ecdf(p, t) >= t / alpha.
bool is_self_consistent(double t, const PValueFamily& family, double alpha);

/// Largest self-consistent threshold found by scanning the candidate set
/// {alpha k / m : 0 <= k <= m} against the empirical c.d.f. Equals the
/// linear step-up threshold; kept as an independent formulation for
/// cross-checking.
double self_consistent_threshold_max(const PValueFamily& family, double alpha);

/// Linear (Benjamini-Hochberg) step-up at level alpha. The threshold is
/// (alpha/m) * max{k : p_(k) <= alpha k/m}, 0 when no k qualifies.
RejectionSet linear_step_up(const PValueFamily& family, double alpha);

/// Storey estimator of 1/pi0 at parameter lambda.
double storey_estimator(const PValueFamily& family, double lambda);

/// Quantile estimator of 1/pi0 at rank k0.
double quantile_estimator(const PValueFamily& family, int k0);

/// Plug-in adaptive step-up: linear step-up at the data-driven level
/// alpha * f(p), with critical values capped at 1.
RejectionSet adaptive_step_up(const PValueFamily& family, double alpha,
                              const Pi0Estimator& estimator);

/// One-stage step-up along a rejection curve. The raw asymptotically optimal
/// curve has c_m = 1, so it always rejects everything; that output is
/// emitted as-is with warning "aorc-degenerate".
RejectionSet one_stage_step_up(const PValueFamily& family,
                               const RejectionCurve& curve);

/// Step-up with shrunken critical values beta(alpha k/m); valid under
/// arbitrary dependence. Rejects {i : p_i <= beta(alpha k_hat / m)}.
RejectionSet beta_step_up(const PValueFamily& family, double alpha,
                          const BetaWeights& weights);

/// Benjamini-Yekutieli procedure: beta step-up with nu_i = 1/(i delta),
/// delta = 1 + 1/2 + ... + 1/m, i.e. critical values alpha k / (m delta).
RejectionSet benjamini_yekutieli(const PValueFamily& family, double alpha);

/// Aggregates a family into one global p-value: min(p_(ceil(gamma m))/gamma, 1).
/// gamma = 1/m reproduces the Bonferroni aggregation.
double aggregate_pvalues(const PValueFamily& family, double gamma);

}  // namespace multest

#endif  // MULTEST_STEPUP_HPP
