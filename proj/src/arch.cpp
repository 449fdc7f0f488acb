#include "approxmul/arch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace approxmul {

MultSpec::MultSpec(int n_rows, int m_cols) : n(n_rows), m(m_cols) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("multiplier widths must satisfy n >= 2 and m >= 2, got " +
                                    std::to_string(n) + "x" + std::to_string(m));
    }
    if (n + m > 62) {
        throw std::invalid_argument("product width n+m must not exceed 62 bits");
    }
}

int ha_count(const MultSpec& spec) {
    return (spec.m - 1) * (spec.n / 2);
}

int uncompressed_count(const MultSpec& spec) {
    return spec.n + (spec.n % 2) * (spec.m - 1);
}

std::vector<PpRef> build_pp_array(const MultSpec& spec) {
    std::vector<PpRef> grid;
    grid.reserve(static_cast<size_t>(spec.n) * spec.m);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.m; ++j) {
            grid.push_back({i, j});
        }
    }
    return grid;
}

std::vector<HaSlot> build_ha_array(const MultSpec& spec) {
    std::vector<HaSlot> slots;
    slots.reserve(static_cast<size_t>(ha_count(spec)));
    for (int p = 0; p < spec.n / 2; ++p) {
        for (int j = 1; j < spec.m; ++j) {
            slots.push_back({p, j});
        }
    }
    return slots;
}

std::vector<PpRef> uncompressed_terms(const MultSpec& spec) {
    // Pair p consumes row 2p cols 1..m-1 and row 2p+1 cols 0..m-2, leaving
    // (2p, 0) and (2p+1, m-1). An odd final row is untouched entirely.
    std::vector<PpRef> terms;
    for (int p = 0; p < spec.n / 2; ++p) {
        terms.push_back({2 * p, 0});
        terms.push_back({2 * p + 1, spec.m - 1});
    }
    if (spec.n % 2 == 1) {
        for (int j = 0; j < spec.m; ++j) {
            terms.push_back({spec.n - 1, j});
        }
    }
    std::sort(terms.begin(), terms.end(), [](const PpRef& a, const PpRef& b) {
        return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    return terms;
}

int search_count(int total_slots, double r, KRounding rounding) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("r must lie in [0,1], got " + std::to_string(r));
    }
    double t = static_cast<double>(total_slots) * r;
    // Snap values that are integral up to FP noise so 10*0.7 counts as 7.
    double nearest_int = std::round(t);
    if (std::abs(t - nearest_int) < 1e-9) {
        t = nearest_int;
    }
    double k = (rounding == KRounding::nearest) ? std::floor(t + 0.5) : std::ceil(t);
    return static_cast<int>(k);
}

SearchPlan select_search_set(const MultSpec& spec, double r, KRounding rounding) {
    SearchPlan plan;
    plan.spec = spec;
    plan.r = r;
    plan.rounding = rounding;

    std::vector<HaSlot> slots = build_ha_array(spec);
    std::sort(slots.begin(), slots.end(), [](const HaSlot& a, const HaSlot& b) {
        return std::tuple(a.weight(), a.pair, a.col) < std::tuple(b.weight(), b.pair, b.col);
    });

    const int k = search_count(static_cast<int>(slots.size()), r, rounding);
    plan.searched.assign(slots.begin(), slots.begin() + k);
    plan.reserved_exact.assign(slots.begin() + k, slots.end());
    plan.uncompressed = uncompressed_terms(spec);
    return plan;
}

}  // namespace approxmul
