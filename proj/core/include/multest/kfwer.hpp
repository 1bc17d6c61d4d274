#ifndef MULTEST_KFWER_HPP
#define MULTEST_KFWER_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "multest/core.hpp"

namespace multest {

/// Candidate null-index set, kept sorted ascending.
using IndexSet = std::vector<std::size_t>;

IndexSet full_index_set(std::size_t m);
IndexSet set_complement(const IndexSet& c, std::size_t m);
IndexSet set_union_sorted(const IndexSet& a, const IndexSet& b);
bool is_subset_of(const IndexSet& a, const IndexSet& b);

/// A family of rejection sets indexed by candidate null sets C, nonincreasing
/// in C. Size-thresholded families reject {i : p_i <= t(|C|)} with t
/// nonincreasing in |C|; custom families supply the map C -> R_C directly
/// and are validated against (NI) by sampling before any step-down run.
class SubsetIndexedFamily {
 public:
  enum class Kind { bonferroni, size_threshold, custom };

  using RejectFn = std::function<IndexSet(const IndexSet&, const PValueFamily&)>;
  using SizeThresholdFn = std::function<double(std::size_t)>;

  /// t_C = min(alpha k / |C|, 1).
  static SubsetIndexedFamily bonferroni(int k, double alpha);
  /// Threshold depending on |C| only; must be nonincreasing in |C|.
  static SubsetIndexedFamily size_thresholded(SizeThresholdFn threshold);
  /// Arbitrary map C -> rejected indices; the result must be sorted
  /// ascending. (NI) is sampled before each step-down run.
  static SubsetIndexedFamily custom(RejectFn reject);

  Kind kind() const { return kind_; }
  bool thresholded_by_size() const { return kind_ != Kind::custom; }

  /// Raw threshold for a candidate set of the given size (size-thresholded
  /// families only).
  double threshold_for_size(std::size_t csize) const;

  /// R_C with the small-candidate convention: when |C| < k everything is
  /// rejected (the k-FWER is vacuously controlled there).
  IndexSet rejections(const IndexSet& c, const PValueFamily& family,
                      int k) const;

 private:
  SubsetIndexedFamily() = default;
  Kind kind_ = Kind::custom;
  int k_ = 1;
  double alpha_ = 0.05;
  SizeThresholdFn size_threshold_;
  RejectFn reject_;
};

/// Rejection set of the Bonferroni family member at candidate set C:
/// {i : p_i <= min(alpha k / |C|, 1)}. Throws on empty C; the step-down
/// drivers apply the small-candidate convention before calling in.
RejectionSet bonferroni_family(const IndexSet& c, int k, double alpha,
                               const PValueFamily& family);

/// One step of the k-FWER step-down recursion: the kept set
/// phi(C) = union over I subset of C^c with |I| <= k-1 of the non-rejected
/// sets A_{C union I}. Size-thresholded families collapse to the threshold at
/// effective size min(m, |C|+k-1); custom families are enumerated, guarded at
/// 1e5 subsets (beyond that the call fails and recommends streamlined_phi).
IndexSet phi(const IndexSet& c, const SubsetIndexedFamily& fam, int k,
             const PValueFamily& family);

/// phi restricted to the single I holding the k-1 largest p-values of C^c.
/// Keeps the k-FWER guarantee only under Dirac configurations.
IndexSet streamlined_phi(const IndexSet& c, const SubsetIndexedFamily& fam,
                         int k, const PValueFamily& family);

/// FWER step-down: iterate C <- A_C from C = {all} to the fixed point and
/// reject its complement.
RejectionSet step_down_fwer(const SubsetIndexedFamily& fam,
                            const PValueFamily& family);

/// k-FWER step-down: iterate C <- phi(C) from C = {all} to the fixed point
/// and reject its complement. Reaches the fixed point in at most m+1 steps.
RejectionSet step_down_kfwer(const SubsetIndexedFamily& fam, int k,
                             const PValueFamily& family);

/// Step-down driven by streamlined_phi; Dirac-configuration guarantee only.
RejectionSet step_down_kfwer_streamlined(const SubsetIndexedFamily& fam, int k,
                                         const PValueFamily& family);

/// Holm step-down: reject {i : p_i <= alpha/(m - l_hat + 1)} with
/// l_hat = max{l in {0..m} : p_(l') <= alpha/(m - l' + 1) for all l' <= l}.
RejectionSet holm(const PValueFamily& family, double alpha);

/// Generalized Holm step-down for the k-FWER: critical values
/// alpha k / min(m, m - l' + k).
RejectionSet generalized_holm(const PValueFamily& family, double alpha, int k);

}  // namespace multest

#endif  // MULTEST_KFWER_HPP
