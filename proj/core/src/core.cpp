#include "multest/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace multest {

PValueFamily::PValueFamily(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw std::invalid_argument("p-value family needs at least 2 values");
  }
  for (double p : values_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("p-value outside [0,1]");
    }
  }
}

OrderedPValues::OrderedPValues(const PValueFamily& family) {
  const std::size_t m = family.size();
  perm_.resize(m);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  std::stable_sort(perm_.begin(), perm_.end(),
                   [&](std::size_t a, std::size_t b) {
                     return family[a] < family[b];
                   });
  sorted_.resize(m);
  for (std::size_t r = 0; r < m; ++r) sorted_[r] = family[perm_[r]];
}

double OrderedPValues::order_stat(std::size_t k) const {
  if (k == 0) return 0.0;
  if (k > sorted_.size()) throw std::out_of_range("rank exceeds m");
  return sorted_[k - 1];
}

std::size_t OrderedPValues::original_index(std::size_t k) const {
  if (k == 0 || k > perm_.size()) throw std::out_of_range("rank exceeds m");
  return perm_[k - 1];
}

bool RejectionSet::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

RejectionSet threshold_rejections(const PValueFamily& family, double t) {
  RejectionSet out;
  out.threshold = t;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i] <= t) out.indices.push_back(i);
  }
  return out;
}

GroundTruth::GroundTruth(const std::vector<std::size_t>& null_indices,
                         std::size_t m)
    : is_null_(m, false), m0_(0) {
  for (std::size_t i : null_indices) {
    if (i >= m) throw std::invalid_argument("null index out of range");
    if (!is_null_[i]) {
      is_null_[i] = true;
      ++m0_;
    }
  }
}

GroundTruth GroundTruth::first_nulls(std::size_t m, std::size_t m0) {
  if (m0 > m) throw std::invalid_argument("m0 exceeds m");
  std::vector<std::size_t> nulls(m0);
  std::iota(nulls.begin(), nulls.end(), std::size_t{0});
  return GroundTruth(nulls, m);
}

OrderedPValues order(const PValueFamily& family) {
  return OrderedPValues(family);
}

double ecdf(const PValueFamily& family, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument("ecdf argument outside [0,1]");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i] <= u) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(family.size());
}

double fdp(const RejectionSet& rejected, const GroundTruth& truth) {
  const std::size_t falses = false_rejections(rejected, truth);
  const std::size_t denom = std::max<std::size_t>(rejected.size(), 1);
  return static_cast<double>(falses) / static_cast<double>(denom);
}

std::size_t false_rejections(const RejectionSet& rejected,
                             const GroundTruth& truth) {
  std::size_t count = 0;
  for (std::size_t i : rejected.indices) {
    if (i >= truth.m()) throw std::invalid_argument("rejected index out of range");
    if (truth.is_null(i)) ++count;
  }
  return count;
}

namespace detail {

double snap_to_integer(double x) {
  constexpr double kIntegerGuard = 1e-12;
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= kIntegerGuard * std::max(1.0, std::abs(x))) return r;
  return x;
}

double guarded_floor(double x) { return std::floor(snap_to_integer(x)); }

double guarded_ceil(double x) { return std::ceil(snap_to_integer(x)); }

}  // namespace detail

}  // namespace multest
