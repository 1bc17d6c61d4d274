#ifndef MULTEST_CORE_HPP
#define MULTEST_CORE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace multest {

/// A family of m p-values, each in [0,1], with a stable index order.
/// Hypothesis indices are 0-based throughout the library and in all
/// serialized output.
class PValueFamily {
 public:
  explicit PValueFamily(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Order statistics of a p-value family. Ranks are 1-based, matching the
/// usual notation p_(1) <= ... <= p_(m), with the convention p_(0) = 0.
/// Ties are broken by ascending original index (stable sort).
class OrderedPValues {
 public:
  explicit OrderedPValues(const PValueFamily& family);

  std::size_t size() const { return sorted_.size(); }

  /// p_(k) for k in {0, ..., m}; p_(0) is 0 by convention.
  double order_stat(std::size_t k) const;

  /// Original (0-based) index of the p-value with rank k in {1, ..., m}.
  std::size_t original_index(std::size_t k) const;

  const std::vector<double>& sorted_values() const { return sorted_; }
  const std::vector<std::size_t>& permutation() const { return perm_; }

 private:
  std::vector<double> sorted_;
  std::vector<std::size_t> perm_;
};

/// Result of a multiple testing procedure: the rejected hypothesis indices
/// (0-based, ascending) plus the realized threshold when the procedure is
/// thresholding-based. `warning` carries a stable machine-readable code for
/// degenerate outputs (e.g. "aorc-degenerate").
struct RejectionSet {
  std::vector<std::size_t> indices;
  std::optional<double> threshold;
  std::optional<std::string> warning;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(std::size_t i) const;
};

/// Builds the rejection set {i : p_i <= t} for a realized threshold t.
RejectionSet threshold_rejections(const PValueFamily& family, double t);

/// The set of true null hypotheses attached to simulated data.
class GroundTruth {
 public:
  GroundTruth(const std::vector<std::size_t>& null_indices, std::size_t m);

  /// Nulls occupy the first m0 indices; alternatives the rest.
  static GroundTruth first_nulls(std::size_t m, std::size_t m0);

  std::size_t m() const { return is_null_.size(); }
  std::size_t m0() const { return m0_; }
  bool is_null(std::size_t i) const { return is_null_[i]; }

 private:
  std::vector<bool> is_null_;
  std::size_t m0_;
};

/// Which error rate a Monte Carlo estimate refers to. `mc_mean` is a plain
/// Monte Carlo mean of a nonnegative statistic (used by the estimator
/// condition and related checks, where the mean may exceed 1).
struct Metric {
  enum class Kind { fdr, kfwer, fdp_tail, mc_mean };
  Kind kind = Kind::fdr;
  int k = 1;           // for kfwer
  double gamma = 0.1;  // for fdp_tail

  static Metric fdr() { return {Kind::fdr, 1, 0.0}; }
  static Metric kfwer(int k) { return {Kind::kfwer, k, 0.0}; }
  static Metric fdp_tail(double gamma) { return {Kind::fdp_tail, 1, gamma}; }
  static Metric mc_mean() { return {Kind::mc_mean, 1, 0.0}; }
};

/// Monte Carlo estimate of an error rate: the mean of the per-replicate
/// statistic, the replicate count and the standard error (sample standard
/// deviation divided by sqrt(replicates)).
struct ErrorRateEstimate {
  Metric metric;
  double estimate = 0.0;
  std::size_t replicates = 0;
  double std_error = 0.0;
};

/// Stable-sorted order statistics with the rank-to-index map.
OrderedPValues order(const PValueFamily& family);

/// Empirical c.d.f. of the family at u: m^-1 #{i : p_i <= u}.
/// Right-continuous and nondecreasing in u. Comparisons are exact
/// floating-point <=.
double ecdf(const PValueFamily& family, double u);

/// False discovery proportion |rejected & nulls| / max(|rejected|, 1).
double fdp(const RejectionSet& rejected, const GroundTruth& truth);

/// Number of false rejections |rejected & nulls|.
std::size_t false_rejections(const RejectionSet& rejected,
                             const GroundTruth& truth);

namespace detail {

/// Returns the nearest integer when x sits within a 1e-12 relative band of
/// it (products like 0.1 * 30 that are mathematically integral), x itself
/// otherwise. All grid comparisons route through this one convention.
double snap_to_integer(double x);

/// floor(x) with the snap_to_integer guard applied first.
double guarded_floor(double x);

/// ceil(x) with the snap_to_integer guard applied first.
double guarded_ceil(double x);

}  // namespace detail

}  // namespace multest

#endif  // MULTEST_CORE_HPP
