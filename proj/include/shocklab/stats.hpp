#pragma once

// Statistics used by the experiment harness: Kolmogorov-Smirnov distances,
// moments, and the fluctuation-exponent fit.

#include <functional>
#include <string>
#include <vector>

#include "shocklab/rng.hpp"

namespace shocklab::mc {

// Two-sided KS statistic of sorted samples against a reference CDF. Throws
// ContractViolation on unsorted input.
double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

struct KsReport {
    std::string reference;
    double ks = 0.0;
    i64 n_samples = 0;
    double threshold = 0.0;
    bool pass = false;
};
KsReport make_ks_report(const std::string& reference, const std::vector<double>& samples,
                        const std::function<double(double)>& cdf, double threshold);

double mean_of(const std::vector<double>& xs);
double variance_of(const std::vector<double>& xs);
double pearson(const std::vector<double>& a, const std::vector<double>& b);
double lag1_autocorrelation(const std::vector<double>& xs);

struct SlopeFit {
    double slope = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0;  // bootstrap percentile interval when available
};

// Least-squares slope of log(var) against log(t). Throws on nonpositive
// variances.
SlopeFit scaling_exponent_fit(const std::vector<std::pair<double, double>>& t_and_var);

// Same fit with a bootstrap confidence interval resampled from the raw
// samples at each scale.
SlopeFit scaling_exponent_fit(const std::vector<double>& ts,
                              const std::vector<std::vector<double>>& samples_per_t,
                              i64 bootstrap_rounds, const SeedSpec& seed);

// upper quantile of a Poisson(lambda) count
i64 poisson_quantile(double lambda, double q);

}  // namespace shocklab::mc
