#pragma once

#include <cstdint>
#include <vector>

namespace approxmul {

/// Bit widths of an unsigned NxM multiplier: operand y has n bits (one
/// partial-product row per bit), operand x has m bits (one column per bit).
struct MultSpec {
    int n = 0;
    int m = 0;

    MultSpec() = default;
    MultSpec(int n_rows, int m_cols);  // throws std::invalid_argument

    int product_bits() const { return n + m; }

    friend bool operator==(const MultSpec&, const MultSpec&) = default;
};

/// One partial product: the AND of x[col] and y[row], binary weight row+col.
struct PpRef {
    int row = 0;
    int col = 0;

    int weight() const { return row + col; }

    friend bool operator==(const PpRef&, const PpRef&) = default;
};

/// One half-adder position in the compression array. Pair p compresses rows
/// 2p and 2p+1; the HA at column j takes (row 2p, col j) and (row 2p+1,
/// col j-1), which share binary weight 2p+j.
struct HaSlot {
    int pair = 0;
    int col = 0;

    PpRef input_a() const { return {2 * pair, col}; }      // even row
    PpRef input_b() const { return {2 * pair + 1, col - 1}; }
    int weight() const { return 2 * pair + col; }

    friend bool operator==(const HaSlot&, const HaSlot&) = default;
};

/// Number of half adders compressing the PP array: (m-1) * floor(n/2).
int ha_count(const MultSpec& spec);

/// Number of PPs left untouched by the HA array: n + (n mod 2) * (m-1).
int uncompressed_count(const MultSpec& spec);

/// The full n*m grid of partial products, row-major.
std::vector<PpRef> build_pp_array(const MultSpec& spec);

/// All HA slots, ordered by (pair, col).
std::vector<HaSlot> build_ha_array(const MultSpec& spec);

/// The PPs not consumed by any HA slot, in (row, col) order.
std::vector<PpRef> uncompressed_terms(const MultSpec& spec);

/// How S*r is turned into the searched-slot count K.
enum class KRounding {
    nearest,  // round half up
    ceiling,
};

int search_count(int total_slots, double r, KRounding rounding = KRounding::nearest);

/// Partition of the HA array into searched and reserved-exact slots, plus
/// the uncompressed PPs. Searched slots are the K lowest under the total
/// order (weight, pair, col) ascending, so the split is a pure function of
/// (spec, r, rounding).
struct SearchPlan {
    MultSpec spec;
    double r = 0.0;
    KRounding rounding = KRounding::nearest;
    std::vector<HaSlot> searched;
    std::vector<HaSlot> reserved_exact;
    std::vector<PpRef> uncompressed;

    int k() const { return static_cast<int>(searched.size()); }
};

SearchPlan select_search_set(const MultSpec& spec, double r,
                             KRounding rounding = KRounding::nearest);

}  // namespace approxmul
