#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "approxmul/arch.hpp"

namespace approxmul {

/// Per-HA simplification. Exact keeps the half adder; OrSum replaces Sum by
/// a|b and grounds Cout; DirectCout wires Cout to input a (the even-row PP)
/// and grounds Sum; Eliminate grounds both outputs.
enum class HaOption : uint8_t {
    Exact = 0,
    OrSum = 1,
    DirectCout = 2,
    Eliminate = 3,
};

inline constexpr int kNumHaOptions = 4;

/// One-letter codes for human-writable configs: E, O, D, X.
char option_code(HaOption opt);
HaOption option_from_code(char code);  // throws std::invalid_argument

/// Option assignment for every searched slot of a SearchPlan, in plan order.
/// Reserved slots are implicitly Exact.
struct ApproxConfig {
    std::vector<HaOption> assignments;

    std::string codes() const;
    static ApproxConfig from_codes(const std::string& codes);
    static ApproxConfig all(HaOption opt, int k);

    friend bool operator==(const ApproxConfig&, const ApproxConfig&) = default;
};

struct HaBits {
    int sum = 0;
    int cout = 0;
};

/// Truth table of one simplified HA. a is input_a (even row), b is input_b.
HaBits ha_output(HaOption opt, int a, int b);

/// Value contributed by one slot in units of its input weight: sum + 2*cout.
/// Exact yields a+b; the other options deviate from it.
inline int ha_value(HaOption opt, int a, int b) {
    switch (opt) {
        case HaOption::Exact: return a + b;
        case HaOption::OrSum: return a | b;
        case HaOption::DirectCout: return 2 * a;
        case HaOption::Eliminate: return 0;
    }
    return 0;
}

/// Signed deviation of one slot from the exact a+b, in weight units.
/// Eliminate: -(a+b); OrSum: -(a&b); DirectCout: a-b; Exact: 0.
inline int ha_error(HaOption opt, int a, int b) {
    return ha_value(opt, a, b) - (a + b);
}

/// Bit-exact value of the approximate multiplier on operands x (m bits) and
/// y (n bits): the weighted sum of all uncompressed PPs plus every slot's
/// Sum and Cout. With every option Exact this equals x*y.
uint64_t evaluate(const SearchPlan& plan, const ApproxConfig& config, uint64_t x, uint64_t y);

/// Number of PP terms surviving compression: uncompressed + per-slot
/// 2 (Exact), 1 (OrSum / DirectCout), 0 (Eliminate).
int compressed_bit_count(const SearchPlan& plan, const ApproxConfig& config);

void check_config(const SearchPlan& plan, const ApproxConfig& config);

}  // namespace approxmul
