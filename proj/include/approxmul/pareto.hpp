#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "approxmul/optimizer.hpp"

namespace approxmul {

/// One design in (pda, mm') space, tagged with the trial it came from.
struct FrontPoint {
    double pda = 0.0;
    double mm_prime = 1.0;
    uint64_t trial_index = 0;
};

/// All non-dominated points under weak dominance (<= in both coordinates,
/// < in at least one), sorted by pda ascending. Identical coordinate pairs
/// collapse to the earliest trial.
std::vector<FrontPoint> pareto_front(const std::vector<FrontPoint>& points);

struct MmRangeRow {
    double lo = 0.0;
    double hi = 0.0;
    size_t count = 0;                       // trials with mm' in [lo, hi]
    std::optional<uint64_t> best_trial;     // trial minimizing pdae in range
    double best_pdae = 0.0;
    double best_mm_prime = 0.0;             // smallest mm' in range
};

struct FrontRow {
    uint64_t trial_index = 0;
    std::string fingerprint;
    double pda = 0.0;
    double mm_prime = 1.0;
    double pdae = 0.0;
    double improvement_pct = 0.0;  // PDA gain over the exact multiplier
};

struct Summary {
    double pda_exact = 0.0;
    double best_pdae = 0.0;
    uint64_t best_pdae_trial = 0;
    size_t trials_total = 0;
    size_t trials_random = 0;
    size_t trials_tpe = 0;
    std::vector<FrontRow> front;
    std::vector<MmRangeRow> ranges;
};

/// Condenses a trial history: front membership with PDA improvement
/// percentages, trial counts by origin, and best-in-range rows for the
/// caller's mm' filters. Every number traces to a stored trial field.
Summary summarize(const std::vector<Trial>& history, double pda_exact,
                  const std::vector<std::pair<double, double>>& mm_ranges);

/// Human-readable rendering of a summary.
std::string render_summary(const Summary& summary);

}  // namespace approxmul
