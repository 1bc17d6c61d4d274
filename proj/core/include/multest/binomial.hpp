#ifndef MULTEST_BINOMIAL_HPP
#define MULTEST_BINOMIAL_HPP

namespace multest {

/// P(Z = j) for Z ~ Binomial(n, t); 0 outside {0..n}.
double binomial_pmf(int n, double t, int j);

/// P(Z <= j), by direct summation of the mass function (no cancellation).
double binomial_cdf(int n, double t, int j);

/// P(Z >= j), by direct summation of the upper tail.
double binomial_survival(int n, double t, int j);

/// (1-alpha)-quantile: min{j in {0..n} : P(Z <= j) >= 1 - alpha}.
/// Nondecreasing in both t and n.
int binomial_quantile(int n, double t, double alpha);

}  // namespace multest

#endif  // MULTEST_BINOMIAL_HPP
