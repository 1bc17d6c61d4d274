#include "multest/sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "multest/pvalue.hpp"

namespace multest {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi,
                      std::uint32_t* lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(product >> 32);
  *lo = static_cast<std::uint32_t>(product);
}

}  // namespace

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream) {
  key_[0] = static_cast<std::uint32_t>(seed);
  key_[1] = static_cast<std::uint32_t>(seed >> 32);
  stream_[0] = static_cast<std::uint32_t>(stream);
  stream_[1] = static_cast<std::uint32_t>(stream >> 32);
}

std::array<std::uint32_t, 4> PhiloxStream::block(std::uint64_t counter) const {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter),
      static_cast<std::uint32_t>(counter >> 32), stream_[0], stream_[1]};
  std::uint32_t k0 = key_[0];
  std::uint32_t k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, c[0], &hi0, &lo0);
    mul_hi_lo(kPhiloxM1, c[2], &hi1, &lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

std::uint32_t PhiloxStream::next_u32() {
  if (buffered_ == 0) {
    buffer_ = block(counter_++);
    buffered_ = 4;
  }
  return buffer_[4 - buffered_--];
}

std::uint64_t PhiloxStream::next_u64() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return (hi << 32) | lo;
}

double PhiloxStream::next_uniform() {
  // 53 random bits, centered: lands in (0,1) with both endpoints excluded.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::pair<PValueFamily, GroundTruth> gen_gaussian(const GaussianModel& model,
                                                  std::uint64_t replicate) {
  if (model.m < 2 || model.m0 > model.m) {
    throw std::invalid_argument("need m >= 2 and m0 <= m");
  }
  if (!(model.rho >= 0.0 && model.rho < 1.0)) {
    throw std::invalid_argument("rho must lie in [0,1)");
  }
  PhiloxStream rng(model.seed, replicate);
  const double shared = rng.next_normal();
  const double w_shared = std::sqrt(model.rho);
  const double w_own = std::sqrt(1.0 - model.rho);
  std::vector<double> p(model.m);
  for (std::size_t i = 0; i < model.m; ++i) {
    const double shift = i < model.m0 ? 0.0 : model.tau;
    const double x = w_shared * shared + w_own * rng.next_normal() + shift;
    p[i] = normal_upper_tail(x);
  }
  return {PValueFamily(std::move(p)),
          GroundTruth::first_nulls(model.m, model.m0)};
}

std::pair<PValueFamily, GroundTruth> gen_dirac_uniform(
    const DiracUniformModel& model, std::uint64_t replicate) {
  if (model.m < 2 || model.m0 > model.m) {
    throw std::invalid_argument("need m >= 2 and m0 <= m");
  }
  PhiloxStream rng(model.seed, replicate);
  std::vector<double> p(model.m, 0.0);
  for (std::size_t i = 0; i < model.m0; ++i) p[i] = rng.next_uniform();
  return {PValueFamily(std::move(p)),
          GroundTruth::first_nulls(model.m, model.m0)};
}

Generator make_generator(const GaussianModel& model) {
  return [model](std::uint64_t replicate) {
    return gen_gaussian(model, replicate);
  };
}

Generator make_generator(const DiracUniformModel& model) {
  return [model](std::uint64_t replicate) {
    return gen_dirac_uniform(model, replicate);
  };
}

namespace {

double replicate_statistic(const Procedure& procedure, const Metric& metric,
                           const Generator& generator,
                           std::uint64_t replicate) {
  const auto [family, truth] = generator(replicate);
  const RejectionSet rejected = procedure(family);
  switch (metric.kind) {
    case Metric::Kind::fdr:
      return fdp(rejected, truth);
    case Metric::Kind::kfwer:
      return false_rejections(rejected, truth) >=
                     static_cast<std::size_t>(metric.k)
                 ? 1.0
                 : 0.0;
    case Metric::Kind::fdp_tail:
      return fdp(rejected, truth) > metric.gamma ? 1.0 : 0.0;
    case Metric::Kind::mc_mean:
      throw std::invalid_argument("mc_mean has no procedure statistic");
  }
  throw std::logic_error("unreachable");
}

// Mean and standard error of per-replicate values, reduced in index order.
ErrorRateEstimate summarize(const Metric& metric,
                            const std::vector<double>& values) {
  const std::size_t n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd =
      n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  ErrorRateEstimate out;
  out.metric = metric;
  out.estimate = mean;
  out.replicates = n;
  out.std_error = sd / std::sqrt(static_cast<double>(n));
  return out;
}

ErrorRateEstimate run_replicates(
    const Metric& metric, std::size_t replicates, std::size_t threads,
    const std::function<double(std::uint64_t)>& statistic) {
  if (replicates == 0) throw std::invalid_argument("need at least 1 replicate");
  std::vector<double> values(replicates);
  threads = std::max<std::size_t>(1, std::min(threads, replicates));
  if (threads == 1) {
    for (std::size_t r = 0; r < replicates; ++r) values[r] = statistic(r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (std::size_t r = t; r < replicates; r += threads) {
            values[r] = statistic(r);
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& error : errors) {
      if (error) std::rethrow_exception(error);
    }
  }
  return summarize(metric, values);
}

}  // namespace

ErrorRateEstimate estimate(const Procedure& procedure, const Metric& metric,
                           const Generator& generator, std::size_t replicates,
                           const EstimateOptions& options) {
  return run_replicates(metric, replicates, options.threads,
                        [&](std::uint64_t r) {
                          return replicate_statistic(procedure, metric,
                                                     generator, r);
                        });
}

ErrorRateEstimate verify_estimator_condition(const Pi0Estimator& estimator,
                                             std::size_t m, std::size_t m0,
                                             std::size_t replicates,
                                             std::uint64_t seed) {
  if (m0 < 1 || m0 > m) throw std::invalid_argument("m0 must lie in {1..m}");
  DiracUniformModel model;
  model.m = m;
  model.m0 = m0 - 1;  // m0-1 uniform coordinates, the rest exactly zero
  model.seed = seed;
  return run_replicates(Metric::mc_mean(), replicates, 1,
                        [&](std::uint64_t r) {
                          const auto [family, truth] =
                              gen_dirac_uniform(model, r);
                          (void)truth;
                          return estimator.evaluate(family);
                        });
}

ErrorRateEstimate lemma_dc_check(const std::function<double(double)>& g,
                                 std::size_t replicates, std::uint64_t seed) {
  if (!g) throw std::invalid_argument("missing function");
  return run_replicates(Metric::mc_mean(), replicates, 1,
                        [&](std::uint64_t r) {
                          PhiloxStream rng(seed, r);
                          const double u = rng.next_uniform();
                          const double v = g(u);
                          if (!(v > 0.0)) {
                            throw std::invalid_argument("g must be positive");
                          }
                          return u <= v ? 1.0 / v : 0.0;
                        });
}

}  // namespace multest
