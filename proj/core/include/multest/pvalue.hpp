#ifndef MULTEST_PVALUE_HPP
#define MULTEST_PVALUE_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace multest {

/// Atoms of a discrete null distribution of a test statistic, as unnormalized
/// weights. Keeping integer-valued weights (e.g. one per atom of a uniform
/// support) makes tail and c.d.f. ratios exact in floating point.
struct DiscreteSupport {
  std::vector<double> points;   // strictly increasing
  std::vector<double> weights;  // positive, same length
  double total = 0.0;           // sum of weights
};

/// Upper-tail distribution function s -> P(S >= s) of a test statistic under
/// one null distribution, either continuous (given as a function) or discrete
/// (given by its support atoms).
class NullTail {
 public:
  /// Gaussian null with the given mean and standard deviation.
  /// The tail is computed through the complementary error function; relative
  /// accuracy is ~1e-14 for standardized statistics up to |s| = 8.
  static NullTail normal(double mean = 0.0, double sd = 1.0);

  /// Uniform distribution on the integers {1, ..., n} with S(x) = x.
  static NullTail discrete_uniform(int n);

  /// Poisson(lambda) truncated where the residual tail mass drops below
  /// `tail_eps`, then treated as an exact finite support.
  static NullTail poisson(double lambda, double tail_eps = 1e-12);

  /// Discrete null from explicit atoms (points strictly increasing,
  /// weights positive).
  static NullTail discrete(std::vector<double> points,
                           std::vector<double> weights);

  /// Continuous null from its upper-tail function (nonincreasing, range
  /// [0,1]).
  static NullTail continuous(std::function<double(double)> upper_tail);

  /// P(S >= s) under this null.
  double upper_tail(double s) const;

  bool is_discrete() const { return support_.has_value(); }
  const DiscreteSupport& support() const;

 private:
  NullTail() = default;
  std::function<double(double)> tail_fn_;
  std::optional<DiscreteSupport> support_;
};

/// A composite null, represented as a finite worst-case collection of tails.
/// Reducing an infinite null set to a finite one is the caller's job.
using CompositeNull = std::vector<NullTail>;

/// p-value of an observed statistic s: the supremum over the composite null
/// of the upper-tail functions at s. Super-uniform under every member null.
/// Throws std::invalid_argument when the collection is empty.
double pvalue_from_statistic(double s, const CompositeNull& null);

/// Exact c.d.f. of the p-value p(S) at u under a single null: P(p(S) <= u).
/// Computed by enumeration for discrete supports; equals u for continuous
/// nulls (probability integral transform).
double pvalue_cdf(const NullTail& null, double u);

/// True iff P(p <= u) <= u at every grid point.
bool superuniformity_grid_check(const NullTail& null,
                                std::span<const double> grid);

/// Standard normal upper tail P(Z >= x).
double normal_upper_tail(double x);

}  // namespace multest

#endif  // MULTEST_PVALUE_HPP
