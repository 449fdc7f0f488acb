#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "approxmul/approx.hpp"
#include "approxmul/arch.hpp"
#include "approxmul/costmodel.hpp"
#include "approxmul/errmetrics.hpp"

namespace approxmul {

enum class Origin {
    random,
    tpe,
};

enum class Sampler {
    tpe,
    random,  // pure random search baseline
};

/// One evaluated configuration.
struct Trial {
    uint64_t index = 0;
    ApproxConfig config;
    std::string fingerprint;
    ErrorReport report;
    CostBreakdown cost;
    double pdae = 0.0;
    Origin origin = Origin::random;
    uint64_t seed = 0;
};

struct TpeParams {
    int n_startup = 0;          // 0 selects max(10, budget/20)
    double gamma = 0.25;        // fraction of history treated as good
    double prior_weight = 1.0;  // additive smoothing of the densities
    int n_candidates = 24;      // candidate draws per suggestion
};

struct SearchOptions {
    uint64_t budget = 0;
    uint64_t seed = 0;
    int workers = 1;
    int batch = 0;  // 0 selects workers
    Sampler sampler = Sampler::tpe;
    TpeParams tpe;
    int exhaustive_cap_bits = kDefaultExhaustiveCapBits;
    uint64_t n_samples = kDefaultSampleCount;  // used beyond the cap
};

/// Uniform draw over the 4^k configuration space, one option per dimension.
ApproxConfig random_config(int k, std::mt19937_64& rng);

/// History indices split by pdae ascending into the best ceil(gamma*n)
/// trials and the rest; ties resolved by trial index, earlier first.
struct GoodBadSplit {
    std::vector<size_t> good;
    std::vector<size_t> bad;
};
GoodBadSplit split_good_bad(const std::vector<Trial>& history, double gamma);

/// Smoothed Parzen density over the 4 options:
/// p_c = (counts_c + prior_weight) / (sum(counts) + 4 * prior_weight).
std::array<double, 4> categorical_density(const std::array<uint64_t, 4>& counts,
                                          double prior_weight);

/// Draws candidate configs from the per-dimension good density, scores each
/// by the log density ratio against the bad density, and returns the best
/// `batch` configs not already in history. Falls back to random configs if
/// the candidate pool cannot fill the batch; padding repeats a config only
/// once the whole space is exhausted.
std::vector<ApproxConfig> tpe_suggest(const std::vector<Trial>& history, int k,
                                      const TpeParams& params, int batch, std::mt19937_64& rng);

using TrialSink = std::function<void(const Trial&)>;

/// Synchronous-round search loop: suggest a batch, evaluate it in parallel,
/// merge results in submission order, repeat until `budget` trials. Fully
/// deterministic for a fixed (seed, batch); the worker count only changes
/// evaluation parallelism, never the trial sequence.
///
/// `sink` is invoked per freshly evaluated trial, in index order.
/// `resume_from` replays prior trials without re-evaluating them; their
/// fingerprints must match the replayed suggestion stream.
std::vector<Trial> run_search(const SearchPlan& plan, const CostModel& cost_model,
                              const SearchOptions& options, const TrialSink& sink = {},
                              const std::vector<Trial>* resume_from = nullptr);

const char* origin_name(Origin origin);
Origin origin_from_name(const std::string& name);

}  // namespace approxmul
