#include "shocklab/tw.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace shocklab::tw {

namespace {

constexpr double kAi0 = 0.35502805388781723926;    // Ai(0) = 3^(-2/3)/Gamma(2/3)
constexpr double kAip0 = 0.25881940379280679841;   // -Ai'(0) = 3^(-1/3)/Gamma(1/3)
constexpr double kSeriesEdge = 8.0;                // Maclaurin/asymptotic switchover
constexpr double kBlendHalf = 0.5;

struct AiPair {
    double ai, aip;
};

AiPair airy_series(double x) {
    const double x3 = x * x * x;
    double f = 1.0, g = x, fp = 0.0, gp = 1.0;
    double a = 1.0, b = x, c = 0.5 * x * x, d = 1.0;
    fp = c;
    for (int k = 1; k < 240; ++k) {
        const double k3 = 3.0 * k;
        a *= x3 / ((k3 - 1.0) * k3);
        b *= x3 / (k3 * (k3 + 1.0));
        d *= x3 / (k3 * (k3 - 2.0));
        if (k >= 2) {
            c *= x3 / ((k3 - 1.0) * (k3 - 3.0));
            fp += c;
        }
        f += a;
        g += b;
        gp += d;
        if (std::fabs(a) + std::fabs(b) < 1e-21 * (1.0 + std::fabs(f) + std::fabs(g))) break;
    }
    return {kAi0 * f - kAip0 * g, kAi0 * fp - kAip0 * gp};
}

AiPair airy_asymptotic_pos(double x) {
    const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
    const double inv = 1.0 / zeta;
    double u = 1.0, v = 1.0, su = 1.0, sv = 1.0, p = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= 12; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
        v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        p *= -inv;
        const double tu = u * p;
        if (std::fabs(tu) > prev) break;  // asymptotic series started diverging
        prev = std::fabs(tu);
        su += tu;
        sv += v * p;
    }
    const double x14 = std::pow(x, 0.25);
    const double e = std::exp(-zeta);
    const double spi2 = 2.0 * std::sqrt(std::numbers::pi);
    return {e * su / (spi2 * x14), -x14 * e * sv / spi2};
}

AiPair airy_asymptotic_neg(double x) {
    const double t = -x;
    const double zeta = (2.0 / 3.0) * t * std::sqrt(t);
    double u = 1.0;
    double u_even = 1.0, u_odd = 0.0, v_even = 1.0, v_odd = 0.0;
    double pm = 1.0;  // zeta^(-m)
    double prev = 1e300;
    for (int m = 1; m <= 12; ++m) {
        u *= (6.0 * m - 5.0) * (6.0 * m - 1.0) / (72.0 * m);
        const double v = u * (6.0 * m + 1.0) / (1.0 - 6.0 * m);
        pm /= zeta;
        if (std::fabs(u * pm) > prev) break;  // past the smallest term
        prev = std::fabs(u * pm);
        const int half = m / 2;  // m = 2k or 2k+1; sign is (-1)^k either way
        const double sgn = (half % 2 == 0) ? 1.0 : -1.0;
        if (m % 2 == 0) {
            u_even += sgn * u * pm;
            v_even += sgn * v * pm;
        } else {
            u_odd += sgn * u * pm;
            v_odd += sgn * v * pm;
        }
    }
    const double th = zeta - 0.25 * std::numbers::pi;
    const double ct = std::cos(th), st = std::sin(th);
    const double t14 = std::pow(t, 0.25);
    const double spi = std::sqrt(std::numbers::pi);
    return {(ct * u_even + st * u_odd) / (spi * t14),
            t14 * (st * v_even - ct * v_odd) / spi};
}

AiPair airy_pair(double x) {
    const double ax = std::fabs(x);
    if (ax <= kSeriesEdge - kBlendHalf) return airy_series(x);
    const AiPair asym = x > 0 ? airy_asymptotic_pos(x) : airy_asymptotic_neg(x);
    if (ax >= kSeriesEdge + kBlendHalf) return asym;
    const AiPair ser = airy_series(x);
    const double w = (ax - (kSeriesEdge - kBlendHalf)) / (2.0 * kBlendHalf);
    return {(1.0 - w) * ser.ai + w * asym.ai, (1.0 - w) * ser.aip + w * asym.aip};
}

// Airy kernel with the stable near-diagonal limit.
double airy_kernel(double x, double y, const AiPair& fx, const AiPair& fy) {
    const double d = x - y;
    if (std::fabs(d) < 1e-5) {
        const double m = 0.5 * (x + y);
        const AiPair fm = airy_pair(m);
        return fm.aip * fm.aip - m * fm.ai * fm.ai;
    }
    return (fx.ai * fy.aip - fx.aip * fy.ai) / d;
}

// det(I - M) by LU with partial pivoting; M is overwritten.
double det_one_minus(std::vector<double>& m, int n) {
    for (int i = 0; i < n * n; ++i) m[i] = -m[i];
    for (int i = 0; i < n; ++i) m[i * n + i] += 1.0;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(m[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double a = std::fabs(m[r * n + col]);
            if (a > best) {
                best = a;
                piv = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
            det = -det;
        }
        det *= m[col * n + col];
        const double inv = 1.0 / m[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col + 1; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
        }
    }
    return det;
}

constexpr double kDomainLength = 16.0;  // kernels are negligible past this window

enum class Kernel { kAiry, kAirySum };

double fredholm_det(double lo, int order, Kernel kernel) {
    if (order < 8) throw InvalidParameter("fredholm: order must be at least 8");
    const Quadrature& q = gauss_legendre(order);
    const double half = 0.5 * kDomainLength;
    std::vector<double> x(order), sw(order);
    std::vector<AiPair> f(order);
    for (int i = 0; i < order; ++i) {
        x[i] = lo + half * (q.nodes[i] + 1.0);
        sw[i] = std::sqrt(q.weights[i] * half);
        if (kernel == Kernel::kAiry) f[i] = airy_pair(x[i]);
    }
    std::vector<double> m(static_cast<size_t>(order) * order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            const double k = kernel == Kernel::kAiry
                                 ? airy_kernel(x[i], x[j], f[i], f[j])
                                 : airy_pair(x[i] + x[j]).ai;
            m[static_cast<size_t>(i) * order + j] = sw[i] * k * sw[j];
        }
    return det_one_minus(m, order);
}

}  // namespace

double airy_ai(double x) {
    if (std::fabs(x) > 40.0) throw std::out_of_range("airy_ai: |x| must be <= 40");
    return airy_pair(x).ai;
}

double airy_ai_prime(double x) {
    if (std::fabs(x) > 40.0) throw std::out_of_range("airy_ai_prime: |x| must be <= 40");
    return airy_pair(x).aip;
}

const Quadrature& gauss_legendre(int order) {
    static std::map<int, Quadrature> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1) throw InvalidParameter("gauss_legendre: order must be positive");

    Quadrature q;
    q.nodes.resize(order);
    q.weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[order - 1 - i] = w;
    }
    return cache.emplace(order, std::move(q)).first->second;
}

double f_gue_cdf(double s, int order) { return fredholm_det(s, order, Kernel::kAiry); }

// det(I - B) with B(x,y) = Ai(x+y) on L^2(w, infinity) equals F_GOE(2w);
// equivalently the kernel Ai((x+y)/2)/2 on L^2(s, infinity) gives F_GOE(s).
// Calibrated against the GOE mean/variance (-1.2065, 1.6078).
double f_goe_cdf(double s, int order) { return fredholm_det(0.5 * s, order, Kernel::kAirySum); }

double goe_scalar_determinant(double window_lo, int order) {
    return fredholm_det(window_lo, order, Kernel::kAirySum);
}

namespace {

// Fritsch-Carlson slopes for a monotone table with uniform-ish spacing.
double pchip_slope(double d0, double d1) {
    if (d0 * d1 <= 0.0) return 0.0;
    return 2.0 * d0 * d1 / (d0 + d1);
}

}  // namespace

double DistTable::cdf_at(double s) const {
    const size_t n = s_grid.size();
    if (s <= s_grid.front()) return cdf.front();
    if (s >= s_grid.back()) return cdf.back();
    const size_t i =
        static_cast<size_t>(std::upper_bound(s_grid.begin(), s_grid.end(), s) - s_grid.begin()) -
        1;
    const double h = s_grid[i + 1] - s_grid[i];
    const double d = (cdf[i + 1] - cdf[i]) / h;
    const double dm = i > 0 ? (cdf[i] - cdf[i - 1]) / (s_grid[i] - s_grid[i - 1]) : d;
    const double dp =
        i + 2 < n ? (cdf[i + 2] - cdf[i + 1]) / (s_grid[i + 2] - s_grid[i + 1]) : d;
    const double m0 = i > 0 ? pchip_slope(dm, d) : d;
    const double m1 = i + 2 < n ? pchip_slope(d, dp) : d;
    const double t = (s - s_grid[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return cdf[i] * (2 * t3 - 3 * t2 + 1) + h * m0 * (t3 - 2 * t2 + t) +
           cdf[i + 1] * (-2 * t3 + 3 * t2) + h * m1 * (t3 - t2);
}

double DistTable::quantile(double u) const {
    const double ulo = cdf.front(), uhi = cdf.back();
    u = std::min(std::max(u, ulo), uhi);
    double a = s_grid.front(), b = s_grid.back();
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        (cdf_at(mid) < u ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

std::vector<double> DistTable::density() const {
    const size_t n = s_grid.size();
    std::vector<double> f(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i)
        f[i] = (cdf[i + 1] - cdf[i - 1]) / (s_grid[i + 1] - s_grid[i - 1]);
    f[0] = (cdf[1] - cdf[0]) / (s_grid[1] - s_grid[0]);
    f[n - 1] = (cdf[n - 1] - cdf[n - 2]) / (s_grid[n - 1] - s_grid[n - 2]);
    return f;
}

double DistTable::mean() const {
    const auto f = density();
    double m = 0.0;
    for (size_t i = 0; i + 1 < s_grid.size(); ++i) {
        const double h = s_grid[i + 1] - s_grid[i];
        m += 0.5 * h * (s_grid[i] * f[i] + s_grid[i + 1] * f[i + 1]);
    }
    return m;
}

double DistTable::variance() const {
    const auto f = density();
    const double m = mean();
    double v = 0.0;
    for (size_t i = 0; i + 1 < s_grid.size(); ++i) {
        const double h = s_grid[i + 1] - s_grid[i];
        const double a = s_grid[i] - m, b = s_grid[i + 1] - m;
        v += 0.5 * h * (a * a * f[i] + b * b * f[i + 1]);
    }
    return v;
}

double DistTable::sample(const SeedSpec& seed, u64 counter) const {
    return quantile(sample_uniform(seed.with_tag(SeedSpec::kSampling), counter));
}

namespace {

DistTable tabulate(int order, double s_lo, double s_hi, double step, Kernel kernel,
                   const char* id) {
    DistTable t;
    t.order = order;
    t.kernel_id = id;
    const i64 n = static_cast<i64>(std::llround((s_hi - s_lo) / step)) + 1;
    t.s_grid.resize(n);
    t.cdf.resize(n);
    for (i64 i = 0; i < n; ++i) {
        const double s = s_lo + static_cast<double>(i) * step;
        t.s_grid[i] = s;
        t.cdf[i] = kernel == Kernel::kAiry ? f_gue_cdf(s, order) : f_goe_cdf(s, order);
    }
    for (i64 i = 0; i < n; ++i) t.cdf[i] = std::min(1.0, std::max(0.0, t.cdf[i]));
    for (i64 i = 1; i < n; ++i) t.cdf[i] = std::max(t.cdf[i], t.cdf[i - 1]);
    return t;
}

}  // namespace

DistTable tabulate_gue(int order, double s_lo, double s_hi, double step) {
    return tabulate(order, s_lo, s_hi, step, Kernel::kAiry, "gue-airy");
}

DistTable tabulate_goe(int order, double s_lo, double s_hi, double step) {
    return tabulate(order, s_lo, s_hi, step, Kernel::kAirySum, "goe-airy-sum");
}

DistTable two_goe_combination(double a, double b, const DistTable& goe, double s_lo,
                              double s_hi, double step) {
    if (a == 0.0 && b == 0.0)
        throw InvalidParameter("two_goe_combination: both coefficients vanish");

    DistTable t;
    t.order = goe.order;
    t.kernel_id = "two-goe-combination";
    // one vanishing coefficient degenerates to a scaled single GOE law
    auto single = [&](double coef, double s) {
        return coef > 0.0 ? goe.cdf_at(s / coef) : 1.0 - goe.cdf_at(s / coef);
    };
    const i64 n = static_cast<i64>(std::llround((s_hi - s_lo) / step)) + 1;
    t.s_grid.resize(n);
    t.cdf.resize(n);
    if (a == 0.0 || b == 0.0) {
        const double coef = a == 0.0 ? b : a;
        for (i64 i = 0; i < n; ++i) {
            t.s_grid[i] = s_lo + i * step;
            t.cdf[i] = single(coef, t.s_grid[i]);
        }
    } else {
        const auto f2 = goe.density();
        for (i64 i = 0; i < n; ++i) {
            const double s = s_lo + i * step;
            t.s_grid[i] = s;
            double acc = 0.0;
            for (size_t j = 0; j + 1 < goe.s_grid.size(); ++j) {
                const double h = goe.s_grid[j + 1] - goe.s_grid[j];
                acc += 0.5 * h *
                       (single(a, s - b * goe.s_grid[j]) * f2[j] +
                        single(a, s - b * goe.s_grid[j + 1]) * f2[j + 1]);
            }
            t.cdf[i] = std::min(1.0, std::max(0.0, acc));
        }
    }
    for (i64 i = 1; i < n; ++i) t.cdf[i] = std::max(t.cdf[i], t.cdf[i - 1]);
    return t;
}

LimitCoefficients x_limit_coefficients(const ShockConstants& sc) {
    const double pref = std::cbrt(2.0) / (std::pow(sc.mu0, 4.0 / 3.0) * sc.upsilon);
    return {pref * sc.sigma1 / (sc.rho * (1.0 - sc.rho)),
            -pref * sc.sigma2 / (sc.lambda * (1.0 - sc.lambda))};
}

LimitCoefficients n_limit_coefficients(const ShockConstants& sc) {
    const LimitCoefficients x = x_limit_coefficients(sc);
    return {x.a * (1.0 - 2.0 * sc.rho), x.b * (1.0 - 2.0 * sc.lambda)};
}

DistTable limit_law_cdf(LimitLaw which, const ShockConstants& sc, const DistTable& goe) {
    const LimitCoefficients c =
        which == LimitLaw::kPosition ? x_limit_coefficients(sc) : n_limit_coefficients(sc);
    const double glo = goe.s_grid.front(), ghi = goe.s_grid.back();
    auto span = [&](double coef) {
        return std::pair<double, double>(std::min(coef * glo, coef * ghi),
                                         std::max(coef * glo, coef * ghi));
    };
    const auto [alo, ahi] = span(c.a);
    const auto [blo, bhi] = span(c.b);
    const double lo = alo + blo - 0.5, hi = ahi + bhi + 0.5;
    DistTable t = two_goe_combination(c.a, c.b, goe, lo, hi);
    t.kernel_id = which == LimitLaw::kPosition ? "limit-law-position" : "limit-law-jumps";
    return t;
}

}  // namespace shocklab::tw
