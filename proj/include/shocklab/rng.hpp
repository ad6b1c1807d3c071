#pragma once

// Counter-based random sources. Every draw is a pure function of
// (master_seed, stream, counter), so simulations replay bit-exactly and
// separate subsystems can share one master seed without sharing state.

#include <cstring>
#include <functional>
#include <utility>

#include "shocklab/common.hpp"

namespace shocklab {

namespace detail {

inline u32 mulhi32(u32 a, u32 b) { return static_cast<u32>((static_cast<u64>(a) * b) >> 32); }

// Philox 4x32, 10 rounds. Key = 64-bit master seed, counter = 128 bits
// (draw index in the low word, stream id in the high word). Returns the
// 128-bit block as two 64-bit words.
inline std::pair<u64, u64> philox4x32(u64 key, u64 ctr_lo, u64 ctr_hi) {
    constexpr u32 kM0 = 0xD2511F53u;
    constexpr u32 kM1 = 0xCD9E8D57u;
    constexpr u32 kW0 = 0x9E3779B9u;
    constexpr u32 kW1 = 0xBB67AE85u;

    u32 x0 = static_cast<u32>(ctr_lo);
    u32 x1 = static_cast<u32>(ctr_lo >> 32);
    u32 x2 = static_cast<u32>(ctr_hi);
    u32 x3 = static_cast<u32>(ctr_hi >> 32);
    u32 k0 = static_cast<u32>(key);
    u32 k1 = static_cast<u32>(key >> 32);

    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k0 += kW0;
            k1 += kW1;
        }
        const u32 hi0 = mulhi32(kM0, x0);
        const u32 lo0 = kM0 * x0;
        const u32 hi1 = mulhi32(kM1, x2);
        const u32 lo1 = kM1 * x2;
        const u32 y0 = hi1 ^ x1 ^ k0;
        const u32 y1 = lo1;
        const u32 y2 = hi0 ^ x3 ^ k1;
        const u32 y3 = lo0;
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
    }
    return {static_cast<u64>(x0) | (static_cast<u64>(x1) << 32),
            static_cast<u64>(x2) | (static_cast<u64>(x3) << 32)};
}

// -log(1-u) for u in [0,1). Deterministic polynomial evaluation, relative
// error below 1e-13; hot enough in the DP sweeps that libm is avoided.
inline double neg_log1m(double u) {
    double v = 1.0 - u;  // in (2^-53, 1]
    u64 bits;
    std::memcpy(&bits, &v, sizeof bits);
    int e = static_cast<int>((bits >> 52) & 0x7FF) - 1023;
    bits = (bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull;
    double m;
    std::memcpy(&m, &bits, sizeof m);
    if (m > 1.4142135623730951) {
        m *= 0.5;
        ++e;
    }
    // log(m) = 2 atanh(r), |r| <= 3-2*sqrt(2)
    const double r = (m - 1.0) / (m + 1.0);
    const double r2 = r * r;
    double s = 1.0 / 15.0;
    s = s * r2 + 1.0 / 13.0;
    s = s * r2 + 1.0 / 11.0;
    s = s * r2 + 1.0 / 9.0;
    s = s * r2 + 1.0 / 7.0;
    s = s * r2 + 1.0 / 5.0;
    s = s * r2 + 1.0 / 3.0;
    s = s * r2 + 1.0;
    constexpr double kLn2 = 0.6931471805599453;
    return -(2.0 * r * s + e * kLn2);
}

}  // namespace detail

// 53-bit uniform in [0, 1); u = 1 cannot occur.
inline double uniform53(u64 word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

// word * n / 2^64: an unbiased-enough range reduction without the division
inline u64 bounded(u64 word, u64 n) {
    return static_cast<u64>((static_cast<unsigned __int128>(word) * n) >> 64);
}

// Named sub-streams of one master seed. Replica index and retry count are
// packed into the stream word so that every (experiment, replica, retry)
// triple draws from a provably disjoint counter space.
struct SeedSpec {
    u64 master_seed = 0;
    u64 stream = 0;

    enum Tag : u64 {
        kBulkWeights = 0,
        kBoundaryP = 1,
        kBoundaryQ = 2,
        kClocks = 3,
        kSampling = 4,
        kScratch = 5,
    };

    SeedSpec with_tag(u64 tag) const { return {master_seed, (stream & ~u64{7}) | tag}; }
    SeedSpec for_replica(u64 replica) const {
        return {master_seed, (stream & u64{0xFF}) | (replica << 8)};
    }
    SeedSpec with_retry(u64 retry) const {
        return {master_seed, (stream & ~u64{0xF8}) | ((retry & 0x1F) << 3)};
    }

    std::pair<u64, u64> block(u64 counter) const {
        return detail::philox4x32(master_seed, counter, stream);
    }
};

inline double sample_uniform(const SeedSpec& seed, u64 counter) {
    return uniform53(seed.block(counter).first);
}

// Inverse-CDF exponential; u = 0 maps to 0, u -> 1 stays finite.
inline double exponential_from_uniform(double u, double rate) {
    if (!(rate > 0.0)) throw InvalidParameter("exponential rate must be positive");
    return detail::neg_log1m(u) / rate;
}

inline double sample_exponential(double rate, const SeedSpec& seed, u64 counter) {
    return exponential_from_uniform(sample_uniform(seed, counter), rate);
}

// Exp(rate) weights attached to lattice cells. weight_at(i, j) is a pure
// function of (seed, i, j); nothing is stored.
struct WeightField {
    SeedSpec seed;  // tag kBulkWeights is applied on every access
    // bounds must stay within the 32-bit halves of the cell counter
    i64 i_min = -(i64{1} << 30), i_max = i64{1} << 30;
    i64 j_min = -(i64{1} << 30), j_max = i64{1} << 30;
    double rate = 1.0;
    std::function<double(i64)> row_rate;  // optional Exp rate per row j
    std::function<double(i64, i64)> forced;  // overrides the draw; for hand-built fixtures

    double rate_for_row(i64 j) const { return row_rate ? row_rate(j) : rate; }
    bool contains(i64 i, i64 j) const {
        return i >= i_min && i <= i_max && j >= j_min && j <= j_max;
    }
};

namespace detail {
// Cell draw index: row in the high 32 bits, column in the low 32. Consecutive
// columns share one Philox block (two 64-bit lanes per call).
inline u64 cell_index(i64 i, i64 j) {
    return (static_cast<u64>(static_cast<u32>(j)) << 32) | static_cast<u64>(static_cast<u32>(i));
}
}  // namespace detail

inline double weight_at(const WeightField& field, i64 i, i64 j) {
    if (!field.contains(i, j))
        throw InvalidParameter("weight_at: cell (" + std::to_string(i) + "," + std::to_string(j) +
                               ") outside field window");
    if (field.forced) return field.forced(i, j);
    const SeedSpec s = field.seed.with_tag(SeedSpec::kBulkWeights);
    const u64 c = detail::cell_index(i, j);
    const auto block = s.block(c >> 1);
    const u64 word = (c & 1) ? block.second : block.first;
    return detail::neg_log1m(uniform53(word)) / field.rate_for_row(j);
}

// Fills out[0..n) with weights of cells (x_lo..x_lo+n-1, j). Identical values
// to weight_at, two cells per Philox call.
void fill_weight_row(const WeightField& field, i64 j, i64 x_lo, i64 n, double* out);

}  // namespace shocklab
