#pragma once

#include <span>
#include <vector>

namespace mwalk::numeric {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation
    std::size_t count = 0;
};
MeanSd mean_sd(std::span<const double> xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

// Regularized incomplete gamma functions P(a,x), Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square law with `dof` degrees of freedom.
double chi_square_pvalue(double stat, int dof);

// Pearson statistic for observed counts against expected counts; bins with
// expected mass below `min_expected` are merged into their neighbor.  Returns
// the p-value and effective dof through the out-params.
double chi_square_test(std::span<const double> observed, std::span<const double> expected,
                       double min_expected, double* stat_out = nullptr, int* dof_out = nullptr);

// Two-sided Kolmogorov-Smirnov test of sorted samples against a CDF given as
// cdf_values[i] = F(samples[i]).  Returns the asymptotic p-value.
double ks_statistic(std::span<const double> sorted_cdf_values);
double ks_pvalue(double d, std::size_t n);

double binomial_log_pmf(long k, long n, double p);

// MLE exponential decay rate of the excess of `samples` over its empirical
// `quantile` (mean-excess estimator); isolates the asymptotic tail rate.
double tail_exponential_rate(std::vector<double> samples, double quantile = 0.9);

}  // namespace mwalk::numeric
