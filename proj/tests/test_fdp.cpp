#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "multest/fdp.hpp"
#include "multest/kfwer.hpp"
#include "test_util.hpp"

using multest::binomial_quantile;
using multest::FdpParams;
using multest::first_violation_index;
using multest::gavrilov_thresholds;
using multest::h_inverse;
using multest::hoeffding_bennett_thresholds;
using multest::lehmann_romano;
using multest::lr_thresholds;
using multest::PValueFamily;
using multest::q_thresholds;
using multest::quantile_binomial;
using multest::quantile_binomial_recursion;
using multest::RejectionSet;
using multest::romano_wolf_select;
using multest::step_down_count_select;
using multest::step_down_select;
using multest::ThresholdFamily;

namespace {

std::vector<std::size_t> rejection_counts(const ThresholdFamily& t,
                                          const PValueFamily& p) {
  std::vector<std::size_t> counts(p.size() + 1, 0);
  for (std::size_t l = 1; l <= p.size(); ++l) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= t[l]) ++c;
    }
    counts[l] = c;
  }
  return counts;
}

// Literal reading of the max-prefix definition, quadratic on purpose.
std::size_t literal_max_prefix(const std::vector<std::size_t>& counts) {
  const std::size_t m = counts.size() - 1;
  std::size_t lhat = 0;
  for (std::size_t l = 1; l <= m; ++l) {
    bool ok = true;
    for (std::size_t lp = 1; lp <= l; ++lp) {
      if (counts[lp] < lp) ok = false;
    }
    if (ok) lhat = l;
  }
  return lhat;
}

// Enumerate nondecreasing size sequences of length m with entries in {0..m}.
template <typename Fn>
void for_each_monotone_sequence(std::size_t m, Fn&& fn) {
  std::vector<std::size_t> sizes(m, 0);
  while (true) {
    fn(sizes);
    std::size_t i = m;
    while (i-- > 0) {
      if (sizes[i] < m) {
        ++sizes[i];
        for (std::size_t j = i + 1; j < m; ++j) sizes[j] = sizes[i];
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

TEST_CASE("markov thresholds by hand at m=4") {
  const auto t = lr_thresholds({0.1, 0.05, 4});
  CHECK(t[1] == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(t[2] == doctest::Approx(0.05 / 3.0).epsilon(1e-12));
  CHECK(t[3] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(t[4] == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("markov threshold starts at alpha/m") {
  for (std::size_t m : {2ul, 5ul, 17ul, 100ul}) {
    for (double gamma : {0.05, 0.1, 0.3, 0.7}) {
      for (double alpha : {0.05, 0.5}) {
        const auto t = lr_thresholds({gamma, alpha, m});
        CHECK(t[1] == doctest::Approx(alpha / static_cast<double>(m))
                          .epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("built-in threshold families are nondecreasing in l") {
  for (std::size_t m : {2ul, 10ul, 50ul, 200ul}) {
    for (double gamma : {0.02, 0.1, 0.25, 0.5, 0.9}) {
      for (double alpha : {0.01, 0.05, 0.5, 0.9}) {
        const FdpParams params{gamma, alpha, m};
        CHECK_NOTHROW(lr_thresholds(params));
        CHECK_NOTHROW(q_thresholds(params));
        CHECK_NOTHROW(hoeffding_bennett_thresholds(params));
      }
      CHECK_NOTHROW(gavrilov_thresholds(m, gamma));
    }
  }
}

TEST_CASE("grid products that are mathematically integral never mis-floor") {
  // 0.3 * 10 evaluates to 2.9999999999999996 in binary; the step shape at
  // l = 10 must still use floor(gamma l) = 3, i.e. exceedance count 4 over
  // 20 - 10 + floor(2.7) + 1 = 13 trials.
  const auto t = lr_thresholds({0.3, 0.05, 20});
  CHECK(t[10] == doctest::Approx(0.05 * 4.0 / 13.0).epsilon(1e-15));
}

TEST_CASE("exact binomial threshold closed form at l=1") {
  // need P(Z >= 1) <= alpha for Z ~ Binomial(4, t): t = 1 - (1-alpha)^(1/4)
  const auto t = q_thresholds({0.1, 0.5, 4});
  CHECK(t[1] == doctest::Approx(1.0 - std::pow(0.5, 0.25)).epsilon(1e-9));
  const auto t2 = q_thresholds({0.1, 0.05, 4});
  CHECK(t2[1] == doctest::Approx(1.0 - std::pow(0.95, 0.25)).epsilon(1e-9));
}

TEST_CASE("exact binomial thresholds dominate the markov thresholds") {
  for (std::size_t m : {4ul, 20ul, 100ul}) {
    for (double gamma : {0.05, 0.1, 0.2}) {
      for (double alpha : {0.05, 0.5}) {
        const FdpParams params{gamma, alpha, m};
        const auto lr = lr_thresholds(params);
        const auto q = q_thresholds(params);
        for (std::size_t l = 1; l <= m; ++l) CHECK(q[l] >= lr[l] - 1e-12);
      }
    }
  }
}

TEST_CASE("exceedance count beyond the trial count forces threshold 1") {
  // gamma l >= n happens for large l when gamma is large
  const auto t = q_thresholds({0.9, 0.05, 4});
  CHECK(t[4] == 1.0);
}

TEST_CASE("h_inverse round-trips") {
  auto h = [](double u) { return u - std::log(u) - 1.0; };
  for (double y : {0.0, 1e-6, 0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    const double u = h_inverse(y);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    CHECK(h(u) == doctest::Approx(y).epsilon(1e-10));
  }
  CHECK(h_inverse(0.0) == 1.0);
}

TEST_CASE("deviation-bound thresholds sit between markov and exact") {
  for (double alpha : {0.05, 0.5}) {
    const FdpParams params{0.2, alpha, 100};
    const auto lr = lr_thresholds(params);
    const auto qp = hoeffding_bennett_thresholds(params);
    const auto q = q_thresholds(params);
    for (std::size_t l = 1; l <= 100; ++l) {
      CHECK(qp[l] >= lr[l]);
      CHECK(q[l] >= qp[l] - 1e-12);
    }
  }
}

TEST_CASE("step-down selection by hand") {
  const auto t = lr_thresholds({0.1, 0.05, 4});
  const PValueFamily p({0.01, 0.015, 0.2, 0.3});
  const RejectionSet r = step_down_select(t, p);
  CHECK(r.indices == std::vector<std::size_t>{0, 1});
  CHECK(*r.threshold == doctest::Approx(0.05 / 3.0));

  const PValueFamily zeros({0.0, 0.0, 0.0, 0.0});
  CHECK(step_down_select(t, zeros).size() == 4);

  const PValueFamily ones({1.0, 1.0, 1.0, 1.0});
  CHECK(lehmann_romano(ones, 0.1, 0.05).empty());
}

TEST_CASE("non-monotone custom thresholds are rejected") {
  CHECK_THROWS_AS(ThresholdFamily({0.2, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdFamily({0.2, 1.3}), std::invalid_argument);
}

TEST_CASE("max-prefix and first-violation selectors agree") {
  multest::PhiloxStream rng(21, 0);
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + trial % 8;
    // random nondecreasing thresholds
    std::vector<double> tv(m);
    double acc = 0.0;
    for (auto& v : tv) {
      acc += 0.2 * rng.next_uniform();
      v = std::min(acc, 1.0);
    }
    const ThresholdFamily t(tv);
    const auto p = trial % 3 == 0 ? test_util::random_lattice_family(m, trial)
                                  : test_util::random_family(m, trial, 131);
    const auto counts = rejection_counts(t, p);
    const std::size_t lhat = step_down_count_select(counts);
    const std::size_t ltilde = first_violation_index(counts);
    CHECK(lhat == literal_max_prefix(counts));
    CHECK(ltilde == lhat + 1);
    // the two rejection sets coincide
    const double t_hat = lhat == 0 ? 0.0 : t[lhat];
    const double t_tilde = std::min(ltilde, m) == 0 ? 0.0 : t[std::min(ltilde, m)];
    const auto by_hat = multest::threshold_rejections(p, t_hat);
    const auto by_tilde = multest::threshold_rejections(p, t_tilde);
    if (lhat < m) {
      CHECK(by_hat.indices == by_tilde.indices);
      CHECK(by_hat.size() == lhat);
    }
  }
}

TEST_CASE("quantile-binomial formulations are identical") {
  multest::PhiloxStream rng(22, 0);
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const double gamma = 0.05 + 0.5 * rng.next_uniform();
    const double alpha = 0.05 + 0.9 * rng.next_uniform() * 0.9;
    const auto p = test_util::random_family(m, trial, 137);
    const auto by_thresholds = quantile_binomial(p, gamma, alpha);
    const auto by_recursion = quantile_binomial_recursion(p, gamma, alpha);
    CHECK(by_thresholds.indices == by_recursion.indices);
  }
}

TEST_CASE("quantile-binomial equals the max-ratio formulation") {
  multest::PhiloxStream rng(23, 0);
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    const std::size_t m = 2 + trial % 6;
    const double gamma = 0.05 + 0.5 * rng.next_uniform();
    const double alpha = 0.5;
    const auto p = test_util::random_family(m, trial, 139);
    const auto ord = multest::order(p);
    const auto proc = quantile_binomial(p, gamma, alpha);
    // reject i iff max over l with p_(l) <= p_i of q_l(p_(l))/l is <= gamma
    for (std::size_t i = 0; i < m; ++i) {
      double worst = 0.0;
      for (std::size_t l = 1; l <= m; ++l) {
        if (ord.order_stat(l) <= p[i]) {
          const long n = static_cast<long>(m) - static_cast<long>(l) +
                         static_cast<long>(multest::detail::guarded_floor(
                             gamma * static_cast<double>(l - 1))) +
                         1;
          const int q = binomial_quantile(static_cast<int>(n),
                                          ord.order_stat(l), alpha);
          worst = std::max(worst, static_cast<double>(q) /
                                      static_cast<double>(l));
        }
      }
      CHECK(proc.contains(i) == (worst <= gamma + 1e-12));
    }
  }
}

TEST_CASE("markov-based procedure is contained in the quantile-binomial one") {
  multest::PhiloxStream rng(24, 0);
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    const std::size_t m = 3 + trial % 10;
    const double gamma = 0.05 + 0.4 * rng.next_uniform();
    const double alpha = 0.05 + 0.5 * rng.next_uniform();
    const auto p = test_util::random_family(m, trial, 149);
    CHECK(test_util::subset_of(lehmann_romano(p, gamma, alpha).indices,
                               quantile_binomial(p, gamma, alpha).indices));
  }
}

TEST_CASE("lehmann-romano by hand") {
  const PValueFamily p({0.01, 0.015, 0.2, 0.3});
  const auto r = lehmann_romano(p, 0.1, 0.05);
  CHECK(r.indices == std::vector<std::size_t>{0, 1});
}

TEST_CASE("romano-wolf selection by hand") {
  CHECK(romano_wolf_select({3ul, 3ul, 3ul}, 0.1) == 1);  // 0.3 < 1 - 0.1
  CHECK(romano_wolf_select({3ul, 5ul, 5ul, 6ul, 6ul, 6ul}, 0.5) == 4);
  // all sizes m: closed form min{k : gamma m < k - gamma}
  const std::size_t m = 7;
  const double gamma = 0.3;
  const std::vector<std::size_t> sizes(m, m);
  std::size_t expected = m + 1;
  for (std::size_t k = 1; k <= m + 1; ++k) {
    if (gamma * m < k - gamma) {
      expected = k;
      break;
    }
  }
  CHECK(romano_wolf_select(sizes, gamma) == expected);
  CHECK_THROWS_AS(romano_wolf_select({3ul, 2ul}, 0.1), std::invalid_argument);
}

TEST_CASE("romano-wolf reindexing identity, exhaustively") {
  // k_hat = floor(gamma l_tilde) + 1 where l_tilde is the first-violation
  // index of R_l = S_{floor(gamma l)+1}
  for (std::size_t m = 2; m <= 8; ++m) {
    for (double gamma : {0.1, 0.25, 1.0 / 3.0, 0.5, 0.75}) {
      for_each_monotone_sequence(m, [&](const std::vector<std::size_t>& sizes) {
        const std::size_t khat = romano_wolf_select(sizes, gamma);
        std::vector<std::size_t> counts(m + 1, 0);
        for (std::size_t l = 1; l <= m; ++l) {
          const auto idx = static_cast<std::size_t>(multest::detail::guarded_floor(
                               gamma * static_cast<double>(l))) + 1;
          counts[l] = sizes[std::min(idx, m) - 1];
        }
        const std::size_t ltilde = first_violation_index(counts);
        const auto rhs = static_cast<std::size_t>(multest::detail::guarded_floor(
                             gamma * static_cast<double>(ltilde))) + 1;
        CHECK(khat == rhs);
      });
    }
  }
}

TEST_CASE("gavrilov comparison curve") {
  const auto t = gavrilov_thresholds(100, 0.1);
  // l = 1: gamma / (m - (1-gamma) + 1) = gamma / (m + gamma)
  CHECK(t[1] == doctest::Approx(0.1 / 100.1).epsilon(1e-12));
  CHECK(t[100] == doctest::Approx(10.0 / 11.0).epsilon(1e-12));
  // the BH curve gamma l / m lies below it once (1-gamma) l >= 1; at l = 1
  // the ordering flips by the hair gamma/m vs gamma/(m+gamma)
  CHECK(0.1 / 100.0 > t[1]);
  for (std::size_t l = 2; l <= 100; ++l) {
    CHECK(0.1 * static_cast<double>(l) / 100.0 <= t[l] + 1e-15);
  }
}
