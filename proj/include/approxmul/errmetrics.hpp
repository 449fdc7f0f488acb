#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "approxmul/approx.hpp"
#include "approxmul/arch.hpp"

namespace approxmul {

using uint128 = unsigned __int128;

std::string uint128_to_string(uint128 value);
uint128 uint128_from_string(const std::string& text);  // throws on bad input

/// Error statistics of one configuration against the exact product.
/// sum_abs and sum_sq are exact integer accumulators of |D| and D^2; mae and
/// mse divide them by the sample count once, in double precision. mm_prime
/// is mae*mse + 1.
struct ErrorReport {
    double mae = 0.0;
    double mse = 0.0;
    double mm_prime = 1.0;
    uint64_t max_abs_error = 0;
    uint64_t sum_abs = 0;
    uint128 sum_sq = 0;
    uint64_t samples = 0;
    bool exhaustive = false;
};

inline constexpr int kDefaultExhaustiveCapBits = 26;
inline constexpr uint64_t kDefaultSampleCount = uint64_t{1} << 24;

/// Sweeps every (x, y) input pair. Throws WidthOverCap when n+m exceeds the
/// cap; callers should fall back to error_metrics_sampled.
struct WidthOverCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ErrorReport error_metrics_exhaustive(const SearchPlan& plan, const ApproxConfig& config,
                                     int width_cap_bits = kDefaultExhaustiveCapBits);

/// Deterministic seeded sweep: inputs are drawn as a prefix of a seeded
/// pseudorandom permutation of the full input space, so n_samples equal to
/// 2^(n+m) covers every pair exactly once and reproduces the exhaustive
/// accumulators. Each draw is marginally uniform.
ErrorReport error_metrics_sampled(const SearchPlan& plan, const ApproxConfig& config,
                                  uint64_t n_samples, uint64_t seed);

}  // namespace approxmul
