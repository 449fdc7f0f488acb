#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "approxmul/arch.hpp"
#include "approxmul/optimizer.hpp"

namespace approxmul {

/// Search parameters persisted as the first line of a trial log, so the
/// downstream commands (pareto, emit) and --resume can reconstruct the run.
struct RunMeta {
    int n = 0;
    int m = 0;
    double r = 0.0;
    KRounding rounding = KRounding::nearest;
    uint64_t seed = 0;
    uint64_t budget = 0;
    int batch = 1;
    Sampler sampler = Sampler::tpe;
    std::string cost_mode = "proxy";  // "proxy" or "external"
    std::string measurement_path;     // external mode only
    TpeParams tpe;
    int exhaustive_cap_bits = kDefaultExhaustiveCapBits;
    uint64_t n_samples = kDefaultSampleCount;
};

std::string serialize_meta(const RunMeta& meta);
RunMeta parse_meta(const std::string& line);

std::string serialize_trial(const Trial& trial);
Trial parse_trial(const std::string& line);

const char* sampler_name(Sampler sampler);
Sampler sampler_from_name(const std::string& name);
const char* rounding_name(KRounding rounding);
KRounding rounding_from_name(const std::string& name);

/// A parsed trial log. Unparseable lines become warnings, not failures;
/// callers that need a contiguous history check the indices themselves.
struct TrialLog {
    RunMeta meta;
    std::vector<Trial> trials;
    std::vector<std::string> warnings;
};

TrialLog read_trial_log(const std::filesystem::path& path);

}  // namespace approxmul
