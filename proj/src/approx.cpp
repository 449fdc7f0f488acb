#include "approxmul/approx.hpp"

#include <stdexcept>

namespace approxmul {

char option_code(HaOption opt) {
    switch (opt) {
        case HaOption::Exact: return 'E';
        case HaOption::OrSum: return 'O';
        case HaOption::DirectCout: return 'D';
        case HaOption::Eliminate: return 'X';
    }
    throw std::invalid_argument("bad HaOption value");
}

HaOption option_from_code(char code) {
    switch (code) {
        case 'E': return HaOption::Exact;
        case 'O': return HaOption::OrSum;
        case 'D': return HaOption::DirectCout;
        case 'X': return HaOption::Eliminate;
        default:
            throw std::invalid_argument(std::string("unknown option code '") + code +
                                        "', expected one of E, O, D, X");
    }
}

std::string ApproxConfig::codes() const {
    std::string s;
    s.reserve(assignments.size());
    for (HaOption opt : assignments) {
        s.push_back(option_code(opt));
    }
    return s;
}

ApproxConfig ApproxConfig::from_codes(const std::string& codes) {
    ApproxConfig config;
    config.assignments.reserve(codes.size());
    for (char c : codes) {
        config.assignments.push_back(option_from_code(c));
    }
    return config;
}

ApproxConfig ApproxConfig::all(HaOption opt, int k) {
    ApproxConfig config;
    config.assignments.assign(static_cast<size_t>(k), opt);
    return config;
}

HaBits ha_output(HaOption opt, int a, int b) {
    switch (opt) {
        case HaOption::Exact: return {a ^ b, a & b};
        case HaOption::OrSum: return {a | b, 0};
        case HaOption::DirectCout: return {0, a};
        case HaOption::Eliminate: return {0, 0};
    }
    throw std::invalid_argument("bad HaOption value");
}

void check_config(const SearchPlan& plan, const ApproxConfig& config) {
    if (config.assignments.size() != plan.searched.size()) {
        throw std::invalid_argument("config has " + std::to_string(config.assignments.size()) +
                                    " assignments but the plan searches " +
                                    std::to_string(plan.searched.size()) + " slots");
    }
}

uint64_t evaluate(const SearchPlan& plan, const ApproxConfig& config, uint64_t x, uint64_t y) {
    check_config(plan, config);
    const MultSpec& spec = plan.spec;
    if (x >= (uint64_t{1} << spec.m)) {
        throw std::invalid_argument("operand x out of range for " + std::to_string(spec.m) +
                                    " bits");
    }
    if (y >= (uint64_t{1} << spec.n)) {
        throw std::invalid_argument("operand y out of range for " + std::to_string(spec.n) +
                                    " bits");
    }

    auto pp = [&](const PpRef& ref) -> int {
        return static_cast<int>((x >> ref.col) & (y >> ref.row) & 1);
    };

    uint64_t acc = 0;
    for (const PpRef& term : plan.uncompressed) {
        acc += static_cast<uint64_t>(pp(term)) << term.weight();
    }
    auto add_slot = [&](const HaSlot& slot, HaOption opt) {
        const HaBits out = ha_output(opt, pp(slot.input_a()), pp(slot.input_b()));
        acc += static_cast<uint64_t>(out.sum) << slot.weight();
        acc += static_cast<uint64_t>(out.cout) << (slot.weight() + 1);
    };
    for (size_t i = 0; i < plan.searched.size(); ++i) {
        add_slot(plan.searched[i], config.assignments[i]);
    }
    for (const HaSlot& slot : plan.reserved_exact) {
        add_slot(slot, HaOption::Exact);
    }
    return acc;
}

int compressed_bit_count(const SearchPlan& plan, const ApproxConfig& config) {
    check_config(plan, config);
    int bits = static_cast<int>(plan.uncompressed.size());
    bits += 2 * static_cast<int>(plan.reserved_exact.size());
    for (HaOption opt : config.assignments) {
        switch (opt) {
            case HaOption::Exact: bits += 2; break;
            case HaOption::OrSum:
            case HaOption::DirectCout: bits += 1; break;
            case HaOption::Eliminate: break;
        }
    }
    return bits;
}

}  // namespace approxmul
