#pragma once

#include <cstdint>
#include <string>

#include "approxmul/approx.hpp"
#include "approxmul/arch.hpp"
#include "approxmul/costmodel.hpp"
#include "approxmul/errmetrics.hpp"

namespace approxmul {

/// One emitted Verilog source. Emission is pure text generation: identical
/// inputs produce byte-identical text.
struct RtlArtifact {
    std::string module_name;
    std::string text;
    MultSpec spec;
    std::string fingerprint;  // empty for the exact reference and testbench
};

/// Approximate multiplier module: AND-gate partial products, per-slot
/// simplified half adders, and one coarse-grained `+` accumulation of the
/// row-pair operand vectors. The optional report/cost show up in the header
/// comment only.
RtlArtifact emit_approx(const SearchPlan& plan, const ApproxConfig& config,
                        const std::string& module_name, const ErrorReport* report = nullptr,
                        const CostBreakdown* cost = nullptr);

/// Exact reference using the `*` operator.
RtlArtifact emit_exact(const MultSpec& spec, const std::string& module_name);

/// Self-checking bench comparing the approximate module against the exact
/// reference. Sweeps all inputs when n+m <= 20; otherwise drives the same
/// seeded input permutation error_metrics_sampled uses, so the printed
/// ERRSUM line can be diffed against the analyzer either way.
RtlArtifact emit_testbench(const MultSpec& spec, const std::string& approx_name,
                           const std::string& exact_name, uint64_t n_samples = 65536,
                           uint64_t seed = 1);

/// Accumulated sums printed by a testbench run.
struct TbErrorSums {
    uint64_t sum_abs = 0;
    uint64_t sum_sq = 0;
    uint64_t max_abs = 0;
    uint64_t samples = 0;
};

/// Parses the "ERRSUM abs=... sq=... max=... samples=..." line from
/// simulator output. Throws when no such line is present.
TbErrorSums parse_testbench_output(const std::string& output);

}  // namespace approxmul
