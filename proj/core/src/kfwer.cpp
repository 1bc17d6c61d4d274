#include "multest/kfwer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace multest {

namespace {

constexpr std::size_t kEnumerationGuard = 100000;

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
}

void check_k(int k, std::size_t m) {
  if (k < 1 || static_cast<std::size_t>(k) > m) {
    throw std::invalid_argument("k must lie in {1..m}");
  }
}

// Number of (r)-subsets of an n-set, capped just above the enumeration guard.
std::size_t choose_capped(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    result = result * (n - r + i) / i;
    if (result > 10 * kEnumerationGuard) return result;
  }
  return result;
}

IndexSet non_rejected(const IndexSet& rejected, std::size_t m) {
  return set_complement(rejected, m);
}

// Cheap sampled check that a custom family is nonincreasing in C.
void validate_ni_by_sampling(const SubsetIndexedFamily& fam,
                             const PValueFamily& family, int k) {
  const std::size_t m = family.size();
  std::uint64_t state = 0x9e3779b97f4a7c15ull;  // fixed, deterministic
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  for (int trial = 0; trial < 16; ++trial) {
    IndexSet small, large;
    for (std::size_t i = 0; i < m; ++i) {
      const auto bits = next() & 3;
      if (bits == 3) small.push_back(i);        // small subset of large
      if (bits >= 2) large.push_back(i);
    }
    const IndexSet r_small = fam.rejections(small, family, k);
    const IndexSet r_large = fam.rejections(large, family, k);
    if (!is_subset_of(r_large, r_small)) {
      throw std::invalid_argument(
          "custom subset-indexed family violates (NI) on sampled chains");
    }
  }
}

}  // namespace

IndexSet full_index_set(std::size_t m) {
  IndexSet s(m);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

IndexSet set_complement(const IndexSet& c, std::size_t m) {
  IndexSet out;
  out.reserve(m - std::min(c.size(), m));
  std::size_t j = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (j < c.size() && c[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

IndexSet set_union_sorted(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

bool is_subset_of(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

SubsetIndexedFamily SubsetIndexedFamily::bonferroni(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  check_level(alpha);
  SubsetIndexedFamily fam;
  fam.kind_ = Kind::bonferroni;
  fam.k_ = k;
  fam.alpha_ = alpha;
  fam.size_threshold_ = [k, alpha](std::size_t csize) {
    return std::min(alpha * static_cast<double>(k) /
                        static_cast<double>(csize),
                    1.0);
  };
  return fam;
}

SubsetIndexedFamily SubsetIndexedFamily::size_thresholded(
    SizeThresholdFn threshold) {
  if (!threshold) throw std::invalid_argument("missing threshold function");
  SubsetIndexedFamily fam;
  fam.kind_ = Kind::size_threshold;
  fam.size_threshold_ = std::move(threshold);
  return fam;
}

SubsetIndexedFamily SubsetIndexedFamily::custom(RejectFn reject) {
  if (!reject) throw std::invalid_argument("missing rejection function");
  SubsetIndexedFamily fam;
  fam.kind_ = Kind::custom;
  fam.reject_ = std::move(reject);
  return fam;
}

double SubsetIndexedFamily::threshold_for_size(std::size_t csize) const {
  if (!thresholded_by_size()) {
    throw std::logic_error("custom family has no size threshold");
  }
  if (csize == 0) return 1.0;
  return size_threshold_(csize);
}

IndexSet SubsetIndexedFamily::rejections(const IndexSet& c,
                                         const PValueFamily& family,
                                         int k) const {
  const std::size_t m = family.size();
  if (c.size() < static_cast<std::size_t>(k)) {
    return full_index_set(m);  // |C| < k: reject everything
  }
  if (thresholded_by_size()) {
    const double t = threshold_for_size(c.size());
    IndexSet out;
    for (std::size_t i = 0; i < m; ++i) {
      if (family[i] <= t) out.push_back(i);
    }
    return out;
  }
  return reject_(c, family);
}

RejectionSet bonferroni_family(const IndexSet& c, int k, double alpha,
                               const PValueFamily& family) {
  if (c.empty()) throw std::invalid_argument("candidate set must be nonempty");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  check_level(alpha);
  const double t = std::min(
      alpha * static_cast<double>(k) / static_cast<double>(c.size()), 1.0);
  return threshold_rejections(family, t);
}

IndexSet phi(const IndexSet& c, const SubsetIndexedFamily& fam, int k,
             const PValueFamily& family) {
  const std::size_t m = family.size();
  check_k(k, m);

  if (fam.thresholded_by_size()) {
    // All augmented sets of maximal size share one threshold.
    const std::size_t eff = std::min(m, c.size() + static_cast<std::size_t>(k) - 1);
    if (eff < static_cast<std::size_t>(k)) return {};  // everything rejected
    const double t = fam.threshold_for_size(eff);
    IndexSet kept;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(family[i] <= t)) kept.push_back(i);
    }
    return kept;
  }

  // Custom family: enumerate the maximal augmentations I of C (by (NI) the
  // union over smaller I is already covered).
  const IndexSet comp = set_complement(c, m);
  const std::size_t r = std::min<std::size_t>(k - 1, comp.size());
  const std::size_t count = choose_capped(comp.size(), r);
  if (count > kEnumerationGuard) {
    throw std::invalid_argument(
        "subset enumeration exceeds 1e5 combinations; use streamlined_phi");
  }

  IndexSet kept;
  std::vector<std::size_t> pick(r);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  auto advance = [&]() {
    std::size_t j = r;
    while (j-- > 0) {
      if (pick[j] != j + comp.size() - r) {
        ++pick[j];
        for (std::size_t l = j + 1; l < r; ++l) pick[l] = pick[l - 1] + 1;
        return true;
      }
    }
    return false;
  };
  while (true) {
    IndexSet augment(r);
    for (std::size_t j = 0; j < r; ++j) augment[j] = comp[pick[j]];
    const IndexSet rejected =
        fam.rejections(set_union_sorted(c, augment), family, k);
    kept = set_union_sorted(kept, non_rejected(rejected, m));
    if (r == 0 || !advance()) break;
  }
  return kept;
}

IndexSet streamlined_phi(const IndexSet& c, const SubsetIndexedFamily& fam,
                         int k, const PValueFamily& family) {
  const std::size_t m = family.size();
  check_k(k, m);
  IndexSet comp = set_complement(c, m);
  const std::size_t r = std::min<std::size_t>(k - 1, comp.size());
  // I = the r largest p-values within C^c (ties: smaller index first).
  std::stable_sort(comp.begin(), comp.end(), [&](std::size_t a, std::size_t b) {
    return family[a] > family[b];
  });
  IndexSet augment(comp.begin(), comp.begin() + r);
  std::sort(augment.begin(), augment.end());
  const IndexSet rejected =
      fam.rejections(set_union_sorted(c, augment), family, k);
  return non_rejected(rejected, m);
}

namespace {

RejectionSet run_step_down(
    const SubsetIndexedFamily& fam, int k, const PValueFamily& family,
    const std::function<IndexSet(const IndexSet&)>& step) {
  const std::size_t m = family.size();
  check_k(k, m);
  if (fam.kind() == SubsetIndexedFamily::Kind::custom) {
    validate_ni_by_sampling(fam, family, k);
  }
  IndexSet c = full_index_set(m);
  for (std::size_t iter = 0; iter <= m + 1; ++iter) {
    IndexSet next = step(c);
    if (next == c) {
      RejectionSet out;
      out.indices = set_complement(c, m);
      if (fam.thresholded_by_size()) {
        const std::size_t eff =
            std::min(m, c.size() + static_cast<std::size_t>(k) - 1);
        out.threshold = eff < static_cast<std::size_t>(k)
                            ? 1.0
                            : fam.threshold_for_size(eff);
      }
      return out;
    }
    c = std::move(next);
  }
  throw std::logic_error("step-down recursion failed to stabilize");
}

}  // namespace

RejectionSet step_down_fwer(const SubsetIndexedFamily& fam,
                            const PValueFamily& family) {
  return step_down_kfwer(fam, 1, family);
}

RejectionSet step_down_kfwer(const SubsetIndexedFamily& fam, int k,
                             const PValueFamily& family) {
  return run_step_down(fam, k, family, [&](const IndexSet& c) {
    return phi(c, fam, k, family);
  });
}

RejectionSet step_down_kfwer_streamlined(const SubsetIndexedFamily& fam, int k,
                                         const PValueFamily& family) {
  return run_step_down(fam, k, family, [&](const IndexSet& c) {
    return streamlined_phi(c, fam, k, family);
  });
}

RejectionSet holm(const PValueFamily& family, double alpha) {
  check_level(alpha);
  const std::size_t m = family.size();
  const OrderedPValues ordered(family);
  std::size_t lhat = 0;
  for (std::size_t l = 1; l <= m; ++l) {
    if (ordered.order_stat(l) <=
        alpha / static_cast<double>(m - l + 1)) {
      lhat = l;
    } else {
      break;
    }
  }
  return threshold_rejections(family,
                              alpha / static_cast<double>(m - lhat + 1));
}

RejectionSet generalized_holm(const PValueFamily& family, double alpha,
                              int k) {
  check_level(alpha);
  const std::size_t m = family.size();
  check_k(k, m);
  const OrderedPValues ordered(family);
  auto critical = [&](std::size_t l) {
    const std::size_t eff =
        std::min(m, m - l + static_cast<std::size_t>(k));
    return alpha * static_cast<double>(k) / static_cast<double>(eff);
  };
  std::size_t lhat = 0;
  for (std::size_t l = 1; l <= m; ++l) {
    if (ordered.order_stat(l) <= critical(l)) {
      lhat = l;
    } else {
      break;
    }
  }
  return threshold_rejections(family, critical(lhat));
}

}  // namespace multest
