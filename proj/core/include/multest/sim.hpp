#ifndef MULTEST_SIM_HPP
#define MULTEST_SIM_HPP

#include <cstdint>
#include <functional>
#include <utility>

#include "multest/core.hpp"
#include "multest/rng.hpp"
#include "multest/stepup.hpp"

namespace multest {

using Procedure = std::function<RejectionSet(const PValueFamily&)>;
using Generator =
    std::function<std::pair<PValueFamily, GroundTruth>(std::uint64_t)>;

/// One-sided Gaussian mean testing with equi-correlation rho: the first m0
/// coordinates are nulls (mean 0), the rest carry a shift tau. p_i is the
/// standard normal upper tail of X_i.
struct GaussianModel {
  std::size_t m = 2;
  std::size_t m0 = 1;
  double rho = 0.0;
  double tau = 2.0;
  std::uint64_t seed = 0;
};

/// Null p-values i.i.d. uniform on (0,1); alternative p-values exactly zero.
struct DiracUniformModel {
  std::size_t m = 2;
  std::size_t m0 = 1;
  std::uint64_t seed = 0;
};

/// Draws one replicate. Deterministic given (model.seed, replicate).
std::pair<PValueFamily, GroundTruth> gen_gaussian(const GaussianModel& model,
                                                  std::uint64_t replicate);
std::pair<PValueFamily, GroundTruth> gen_dirac_uniform(
    const DiracUniformModel& model, std::uint64_t replicate);

Generator make_generator(const GaussianModel& model);
Generator make_generator(const DiracUniformModel& model);

struct EstimateOptions {
  std::size_t threads = 1;
};

/// Monte Carlo estimate of an error rate of `procedure` under `generator`.
/// Per-replicate statistics are averaged in replicate order, so the result
/// is bit-identical regardless of the thread count.
ErrorRateEstimate estimate(const Procedure& procedure, const Metric& metric,
                           const Generator& generator, std::size_t replicates,
                           const EstimateOptions& options = {});

/// Monte Carlo mean of the reciprocal-pi0 estimator under the distribution
/// with m0-1 uniform null coordinates and the rest exactly zero. The control
/// condition requires this mean to stay below m/m0.
ErrorRateEstimate verify_estimator_condition(const Pi0Estimator& estimator,
                                             std::size_t m, std::size_t m0,
                                             std::size_t replicates,
                                             std::uint64_t seed = 0);

/// Monte Carlo mean of 1{U <= g(U)} / g(U) for U uniform and g a positive
/// nonincreasing function; the mean is at most 1.
ErrorRateEstimate lemma_dc_check(const std::function<double(double)>& g,
                                 std::size_t replicates,
                                 std::uint64_t seed = 0);

}  // namespace multest

#endif  // MULTEST_SIM_HPP
