#include "approxmul/errmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace approxmul {

std::string uint128_to_string(uint128 value) {
    if (value == 0) {
        return "0";
    }
    std::string digits;
    while (value > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

uint128 uint128_from_string(const std::string& text) {
    if (text.empty()) {
        throw std::invalid_argument("empty integer literal");
    }
    uint128 value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("bad digit in integer literal: " + text);
        }
        value = value * 10 + static_cast<uint128>(c - '0');
    }
    return value;
}

namespace {

struct ActiveSlot {
    int pair;
    int col;
    int weight;
    HaOption opt;
};

// Searched slots whose option deviates from Exact; every other slot
// contributes zero error for all inputs.
std::vector<ActiveSlot> active_slots(const SearchPlan& plan, const ApproxConfig& config) {
    std::vector<ActiveSlot> active;
    for (size_t i = 0; i < plan.searched.size(); ++i) {
        if (config.assignments[i] != HaOption::Exact) {
            const HaSlot& slot = plan.searched[i];
            active.push_back({slot.pair, slot.col, slot.weight(), config.assignments[i]});
        }
    }
    return active;
}

struct Accumulators {
    uint64_t sum_abs = 0;
    uint128 sum_sq = 0;
    uint64_t max_abs = 0;

    void add(int64_t d) {
        const uint64_t a = static_cast<uint64_t>(d < 0 ? -d : d);
        sum_abs += a;
        sum_sq += static_cast<uint128>(a) * a;
        max_abs = std::max(max_abs, a);
    }
};

ErrorReport finish(Accumulators acc, uint64_t samples, bool exhaustive) {
    ErrorReport report;
    report.sum_abs = acc.sum_abs;
    report.sum_sq = acc.sum_sq;
    report.max_abs_error = acc.max_abs;
    report.samples = samples;
    report.exhaustive = exhaustive;
    report.mae = static_cast<double>(acc.sum_abs) / static_cast<double>(samples);
    report.mse = static_cast<double>(acc.sum_sq) / static_cast<double>(samples);
    report.mm_prime = report.mae * report.mse + 1.0;
    return report;
}

int64_t signed_deviation(const std::vector<ActiveSlot>& active, uint64_t x, uint64_t y) {
    int64_t d = 0;
    for (const ActiveSlot& s : active) {
        const int a = static_cast<int>((x >> s.col) & (y >> (2 * s.pair)) & 1);
        const int b = static_cast<int>((x >> (s.col - 1)) & (y >> (2 * s.pair + 1)) & 1);
        d += static_cast<int64_t>(ha_error(s.opt, a, b)) << s.weight;
    }
    return d;
}

// Per-pair lookup tables: D factors as a sum over row pairs, and each pair's
// term depends only on x and its two y bits. table[pair][u + 2v][x] holds
// that term, so the inner sweep is one lookup per active pair.
constexpr int kTablePathMaxColsBits = 16;

ErrorReport exhaustive_by_tables(const SearchPlan& plan, const std::vector<ActiveSlot>& active) {
    const int n = plan.spec.n;
    const int m = plan.spec.m;
    const uint64_t x_count = uint64_t{1} << m;
    const uint64_t y_count = uint64_t{1} << n;

    std::vector<int> pairs;
    for (const ActiveSlot& s : active) {
        if (std::find(pairs.begin(), pairs.end(), s.pair) == pairs.end()) {
            pairs.push_back(s.pair);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::vector<int64_t>> tables(pairs.size(),
                                             std::vector<int64_t>(4 * x_count, 0));
    for (const ActiveSlot& s : active) {
        const size_t pi = static_cast<size_t>(
            std::find(pairs.begin(), pairs.end(), s.pair) - pairs.begin());
        for (int uv = 0; uv < 4; ++uv) {
            const int u = uv & 1;
            const int v = uv >> 1;
            int64_t* row = tables[pi].data() + static_cast<size_t>(uv) * x_count;
            for (uint64_t x = 0; x < x_count; ++x) {
                const int a = static_cast<int>((x >> s.col) & 1) & u;
                const int b = static_cast<int>((x >> (s.col - 1)) & 1) & v;
                row[x] += static_cast<int64_t>(ha_error(s.opt, a, b)) << s.weight;
            }
        }
    }

    Accumulators acc;
    std::vector<const int64_t*> rows(pairs.size());
    for (uint64_t y = 0; y < y_count; ++y) {
        for (size_t pi = 0; pi < pairs.size(); ++pi) {
            const int uv = static_cast<int>((y >> (2 * pairs[pi])) & 1) |
                           (static_cast<int>((y >> (2 * pairs[pi] + 1)) & 1) << 1);
            rows[pi] = tables[pi].data() + static_cast<size_t>(uv) * x_count;
        }
        for (uint64_t x = 0; x < x_count; ++x) {
            int64_t d = 0;
            for (const int64_t* row : rows) {
                d += row[x];
            }
            acc.add(d);
        }
    }
    return finish(acc, x_count * y_count, true);
}

// splitmix64 finalizer, used as the Feistel round function.
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded bijection on [0, 2^bits): a 4-round Feistel network over an even
// bit count, cycle-walked back into the domain when bits is odd.
uint64_t permute_index(uint64_t v, int bits, uint64_t seed) {
    const int even_bits = bits + (bits & 1);
    const int half = even_bits / 2;
    const uint64_t half_mask = (uint64_t{1} << half) - 1;
    const uint64_t domain = uint64_t{1} << bits;
    do {
        uint64_t left = v >> half;
        uint64_t right = v & half_mask;
        for (int round = 0; round < 4; ++round) {
            const uint64_t f =
                mix64(right ^ seed ^ (0xa0761d6478bd642fULL * static_cast<uint64_t>(round + 1))) &
                half_mask;
            const uint64_t next_right = left ^ f;
            left = right;
            right = next_right;
        }
        v = (left << half) | right;
    } while (v >= domain);
    return v;
}

}  // namespace

ErrorReport error_metrics_exhaustive(const SearchPlan& plan, const ApproxConfig& config,
                                     int width_cap_bits) {
    check_config(plan, config);
    const int bits = plan.spec.product_bits();
    if (bits > width_cap_bits) {
        throw WidthOverCap("input space of 2^" + std::to_string(bits) +
                           " exceeds the exhaustive cap of 2^" + std::to_string(width_cap_bits) +
                           "; use error_metrics_sampled");
    }

    const std::vector<ActiveSlot> active = active_slots(plan, config);
    const uint64_t samples = uint64_t{1} << bits;
    if (active.empty()) {
        return finish(Accumulators{}, samples, true);
    }
    if (plan.spec.m <= kTablePathMaxColsBits) {
        return exhaustive_by_tables(plan, active);
    }

    Accumulators acc;
    const uint64_t x_count = uint64_t{1} << plan.spec.m;
    const uint64_t y_count = uint64_t{1} << plan.spec.n;
    for (uint64_t y = 0; y < y_count; ++y) {
        for (uint64_t x = 0; x < x_count; ++x) {
            acc.add(signed_deviation(active, x, y));
        }
    }
    return finish(acc, samples, true);
}

ErrorReport error_metrics_sampled(const SearchPlan& plan, const ApproxConfig& config,
                                  uint64_t n_samples, uint64_t seed) {
    check_config(plan, config);
    if (n_samples == 0) {
        throw std::invalid_argument("n_samples must be at least 1");
    }

    const std::vector<ActiveSlot> active = active_slots(plan, config);
    if (active.empty()) {
        return finish(Accumulators{}, n_samples, false);
    }

    const int bits = plan.spec.product_bits();
    const uint64_t domain = uint64_t{1} << bits;
    const uint64_t x_mask = (uint64_t{1} << plan.spec.m) - 1;

    Accumulators acc;
    uint64_t pass_seed = mix64(seed);
    uint64_t within = 0;
    for (uint64_t i = 0; i < n_samples; ++i) {
        const uint64_t idx = permute_index(within, bits, pass_seed);
        const uint64_t x = idx & x_mask;
        const uint64_t y = idx >> plan.spec.m;
        acc.add(signed_deviation(active, x, y));
        if (++within == domain) {
            within = 0;
            pass_seed = mix64(pass_seed);
        }
    }
    return finish(acc, n_samples, false);
}

}  // namespace approxmul
