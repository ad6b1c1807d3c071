#include "shocklab/rng.hpp"

#include <algorithm>

namespace shocklab {

void fill_weight_row(const WeightField& field, i64 j, i64 x_lo, i64 n, double* out) {
    if (n <= 0) return;
    if (!field.contains(x_lo, j) || !field.contains(x_lo + n - 1, j))
        throw InvalidParameter("fill_weight_row: range outside field window");
    if (field.forced) {
        for (i64 k = 0; k < n; ++k) out[k] = field.forced(x_lo + k, j);
        return;
    }
    const SeedSpec s = field.seed.with_tag(SeedSpec::kBulkWeights);
    const double inv_rate = 1.0 / field.rate_for_row(j);

    // The column index lives in the low 32 bits of the draw counter and
    // advances in u32 arithmetic so negative-to-positive column crossings
    // wrap the same way cell_index does. Words are staged per chunk and the
    // exponential transform runs as its own pipelineable loop.
    const u64 hi = static_cast<u64>(static_cast<u32>(j)) << 32;
    u32 lo = static_cast<u32>(x_lo);
    i64 done = 0;
    constexpr i64 kChunk = 2048;
    u64 words[kChunk];
    while (done < n) {
        const i64 len = std::min(kChunk, n - done);
        i64 k = 0;
        if (lo & 1) {
            words[k++] = s.block((hi | lo) >> 1).second;
            ++lo;
        }
        for (; k + 1 < len; k += 2, lo += 2) {
            const auto block = s.block((hi | lo) >> 1);
            words[k] = block.first;
            words[k + 1] = block.second;
        }
        if (k < len) {
            words[k] = s.block((hi | lo) >> 1).first;
            ++lo;  // the block's second word belongs to the next chunk
        }
        double* chunk_out = out + done;
        for (i64 i = 0; i < len; ++i)
            chunk_out[i] = detail::neg_log1m(uniform53(words[i])) * inv_rate;
        done += len;
    }
}

}  // namespace shocklab
