#include "shocklab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace shocklab::mc {

double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    const i64 n = static_cast<i64>(sorted.size());
    if (n < 2) throw InvalidParameter("ks_statistic: need at least two samples");
    double worst = 0.0;
    for (i64 i = 0; i < n; ++i) {
        if (i > 0 && sorted[i] < sorted[i - 1])
            throw ContractViolation("ks_statistic: input not sorted");
        const double f = cdf(sorted[i]);
        worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
        worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return worst;
}

KsReport make_ks_report(const std::string& reference, const std::vector<double>& samples,
                        const std::function<double(double)>& cdf, double threshold) {
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    KsReport r;
    r.reference = reference;
    r.n_samples = static_cast<i64>(samples.size());
    r.ks = ks_statistic(sorted, cdf);
    r.threshold = threshold;
    r.pass = r.ks <= threshold;
    return r;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) throw InvalidParameter("pearson: size mismatch");
    const double ma = mean_of(a), mb = mean_of(b);
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double x = a[i] - ma, y = b[i] - mb;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    return sab / std::sqrt(saa * sbb);
}

double lag1_autocorrelation(const std::vector<double>& xs) {
    if (xs.size() < 3) throw InvalidParameter("lag1: too few samples");
    std::vector<double> a(xs.begin(), xs.end() - 1), b(xs.begin() + 1, xs.end());
    return pearson(a, b);
}

namespace {

double slope_of(const std::vector<double>& lx, const std::vector<double>& ly) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SlopeFit scaling_exponent_fit(const std::vector<std::pair<double, double>>& t_and_var) {
    if (t_and_var.size() < 3) throw InvalidParameter("exponent fit: need at least 3 scales");
    std::vector<double> lx, ly;
    for (const auto& [t, v] : t_and_var) {
        if (!(v > 0.0)) throw InvalidParameter("exponent fit: nonpositive variance");
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
    }
    SlopeFit f;
    f.slope = slope_of(lx, ly);
    f.ci_lo = f.ci_hi = f.slope;
    return f;
}

SlopeFit scaling_exponent_fit(const std::vector<double>& ts,
                              const std::vector<std::vector<double>>& samples_per_t,
                              i64 bootstrap_rounds, const SeedSpec& seed) {
    if (ts.size() != samples_per_t.size()) throw InvalidParameter("exponent fit: size mismatch");
    std::vector<std::pair<double, double>> tv;
    for (size_t i = 0; i < ts.size(); ++i) tv.emplace_back(ts[i], variance_of(samples_per_t[i]));
    SlopeFit f = scaling_exponent_fit(tv);

    std::vector<double> slopes(bootstrap_rounds);
    const SeedSpec s = seed.with_tag(SeedSpec::kSampling);
    u64 ctr = 0;
    for (i64 b = 0; b < bootstrap_rounds; ++b) {
        std::vector<std::pair<double, double>> btv;
        for (size_t i = 0; i < ts.size(); ++i) {
            const auto& xs = samples_per_t[i];
            const size_t n = xs.size();
            double sum = 0, sum2 = 0;
            for (size_t k = 0; k < n; ++k) {
                const u64 word = s.block(ctr++).first;
                const double x = xs[word % n];
                sum += x;
                sum2 += x * x;
            }
            const double m = sum / n;
            btv.emplace_back(ts[i], (sum2 - n * m * m) / (n - 1));
        }
        slopes[b] = scaling_exponent_fit(btv).slope;
    }
    std::sort(slopes.begin(), slopes.end());
    if (bootstrap_rounds >= 40) {
        f.ci_lo = slopes[static_cast<size_t>(0.025 * bootstrap_rounds)];
        f.ci_hi = slopes[static_cast<size_t>(0.975 * bootstrap_rounds)];
    }
    return f;
}

i64 poisson_quantile(double lambda, double q) {
    if (!(lambda > 0.0 && q > 0.0 && q < 1.0)) throw InvalidParameter("poisson_quantile");
    const i64 mode = static_cast<i64>(lambda);
    // stable pmf from the mode outwards
    const double log_pmf_mode = mode * std::log(lambda) - lambda - std::lgamma(mode + 1.0);
    std::vector<double> pmf;
    const i64 hi = mode + static_cast<i64>(20.0 * std::sqrt(lambda) + 50.0);
    pmf.resize(hi + 1, 0.0);
    pmf[mode] = std::exp(log_pmf_mode);
    for (i64 k = mode + 1; k <= hi; ++k) pmf[k] = pmf[k - 1] * lambda / static_cast<double>(k);
    for (i64 k = mode - 1; k >= 0; --k) pmf[k] = pmf[k + 1] * static_cast<double>(k + 1) / lambda;
    double acc = 0.0;
    for (i64 k = 0; k <= hi; ++k) {
        acc += pmf[k];
        if (acc >= q) return k;
    }
    return hi;
}

}  // namespace shocklab::mc
