#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "approxmul/arch.hpp"
#include "approxmul/optimizer.hpp"
#include "approxmul/trial_log.hpp"

namespace approxmul {

/// A bad invocation: reported and mapped to exit code 1. Runtime failures
/// use ordinary exceptions and map to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Everything the search subcommand needs. validate() aggregates every
/// field problem into a single UsageError.
struct RunConfig {
    int n = 8;
    int m = 8;
    double r = 0.5;
    uint64_t budget = 100;
    uint64_t seed = 1;
    int workers = 1;
    int batch = 0;  // 0 selects workers
    Sampler sampler = Sampler::tpe;
    KRounding rounding = KRounding::nearest;
    std::string cost_mode = "proxy";  // "proxy" or "external"
    std::string measurement_path;
    std::filesystem::path output_dir = ".";
    bool resume = false;
    TpeParams tpe;
    int exhaustive_cap_bits = kDefaultExhaustiveCapBits;
    uint64_t n_samples = kDefaultSampleCount;

    void validate() const;  // throws UsageError listing every bad field
};

int cmd_search(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_pareto(const std::filesystem::path& log_path, const std::filesystem::path& output_dir,
               const std::vector<std::pair<double, double>>& mm_ranges, std::ostream& out,
               std::ostream& err);

struct EmitSelector {
    bool front = false;
    std::vector<uint64_t> trial_indices;
};

int cmd_emit(const std::filesystem::path& log_path, const EmitSelector& selector,
             const std::filesystem::path& output_dir, std::ostream& out, std::ostream& err);

struct EvalRequest {
    int n = 8;
    int m = 8;
    double r = 0.5;
    KRounding rounding = KRounding::nearest;
    std::string option_codes;
    uint64_t seed = 1;
    int exhaustive_cap_bits = kDefaultExhaustiveCapBits;
    uint64_t n_samples = kDefaultSampleCount;
};

int cmd_eval(const EvalRequest& request, std::ostream& out, std::ostream& err);

/// Runs `search` over the standard r schedule {0.3, 0.4, 0.5, 0.6, 0.7},
/// one subdirectory per r.
int cmd_sweep(const RunConfig& base, std::ostream& out, std::ostream& err);

/// Full command-line front end. `args` excludes the program name.
/// Exit codes: 0 ok, 1 usage, 2 runtime failure.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace approxmul
