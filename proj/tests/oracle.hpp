#pragma once

// Test-only reference implementations, deliberately naive and independent of
// the library code paths they check: literal truth tables, explicit grid
// loops, pairwise dominance scans.

#include <cstdint>
#include <string>
#include <vector>

#include "approxmul/approx.hpp"
#include "approxmul/arch.hpp"

namespace oracle {

inline int sum_bit(char code, int a, int b) {
    switch (code) {
        case 'E': return a ^ b;
        case 'O': return a | b;
        case 'D': return 0;
        case 'X': return 0;
    }
    return -1;
}

inline int cout_bit(char code, int a, int b) {
    switch (code) {
        case 'E': return a & b;
        case 'O': return 0;
        case 'D': return a;
        case 'X': return 0;
    }
    return -1;
}

struct SlotOption {
    int pair;
    int col;
    char code;
};

// Every HA slot of a plan with its effective option ('E' for reserved).
inline std::vector<SlotOption> slot_options(const approxmul::SearchPlan& plan,
                                            const approxmul::ApproxConfig& config) {
    std::vector<SlotOption> slots;
    for (size_t i = 0; i < plan.searched.size(); ++i) {
        slots.push_back({plan.searched[i].pair, plan.searched[i].col,
                         approxmul::option_code(config.assignments[i])});
    }
    for (const approxmul::HaSlot& slot : plan.reserved_exact) {
        slots.push_back({slot.pair, slot.col, 'E'});
    }
    return slots;
}

// Builds the full PP grid, applies every HA by explicit row/col arithmetic,
// then adds each surviving bit at its weight.
inline uint64_t evaluate(int n, int m, const std::vector<SlotOption>& slots, uint64_t x,
                         uint64_t y) {
    std::vector<std::vector<int>> grid(n, std::vector<int>(m));
    std::vector<std::vector<int>> used(n, std::vector<int>(m, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            grid[i][j] = static_cast<int>((x >> j) & 1) & static_cast<int>((y >> i) & 1);
        }
    }
    uint64_t total = 0;
    for (const SlotOption& s : slots) {
        const int a = grid[2 * s.pair][s.col];
        const int b = grid[2 * s.pair + 1][s.col - 1];
        used[2 * s.pair][s.col] = 1;
        used[2 * s.pair + 1][s.col - 1] = 1;
        const int w = 2 * s.pair + s.col;
        total += static_cast<uint64_t>(sum_bit(s.code, a, b)) << w;
        total += static_cast<uint64_t>(cout_bit(s.code, a, b)) << (w + 1);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            if (!used[i][j]) {
                total += static_cast<uint64_t>(grid[i][j]) << (i + j);
            }
        }
    }
    return total;
}

struct Metrics {
    uint64_t sum_abs = 0;
    unsigned __int128 sum_sq = 0;
    uint64_t max_abs = 0;
    double mae = 0.0;
    double mse = 0.0;
};

// Double loop over every input pair, |D| and D^2 accumulated exactly, one
// division at the end.
inline Metrics metrics(int n, int m, const std::vector<SlotOption>& slots) {
    Metrics result;
    const uint64_t x_count = uint64_t{1} << m;
    const uint64_t y_count = uint64_t{1} << n;
    for (uint64_t x = 0; x < x_count; ++x) {
        for (uint64_t y = 0; y < y_count; ++y) {
            const int64_t approx = static_cast<int64_t>(evaluate(n, m, slots, x, y));
            const int64_t exact = static_cast<int64_t>(x * y);
            const int64_t d = approx - exact;
            const uint64_t mag = static_cast<uint64_t>(d < 0 ? -d : d);
            result.sum_abs += mag;
            result.sum_sq += static_cast<unsigned __int128>(mag) * mag;
            if (mag > result.max_abs) {
                result.max_abs = mag;
            }
        }
    }
    const double total = static_cast<double>(x_count) * static_cast<double>(y_count);
    result.mae = static_cast<double>(result.sum_abs) / total;
    result.mse = static_cast<double>(result.sum_sq) / total;
    return result;
}

struct Point {
    double pda;
    double mm;
};

inline bool dominates(const Point& a, const Point& b) {
    return a.pda <= b.pda && a.mm <= b.mm && (a.pda < b.pda || a.mm < b.mm);
}

// Indices of non-dominated points; identical coordinate pairs keep the
// earliest index only.
inline std::vector<size_t> front_indices(const std::vector<Point>& points) {
    std::vector<size_t> front;
    for (size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (size_t j = 0; j < points.size() && keep; ++j) {
            if (j != i && dominates(points[j], points[i])) {
                keep = false;
            }
        }
        for (size_t j = 0; j < i && keep; ++j) {
            if (points[j].pda == points[i].pda && points[j].mm == points[i].mm) {
                keep = false;
            }
        }
        if (keep) {
            front.push_back(i);
        }
    }
    return front;
}

}  // namespace oracle
