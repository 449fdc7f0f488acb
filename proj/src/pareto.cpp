#include "approxmul/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace approxmul {

std::vector<FrontPoint> pareto_front(const std::vector<FrontPoint>& points) {
    for (const FrontPoint& pt : points) {
        if (!std::isfinite(pt.pda) || !std::isfinite(pt.mm_prime) || pt.pda <= 0.0) {
            throw std::invalid_argument("pareto_front requires finite positive coordinates");
        }
    }
    std::vector<FrontPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const FrontPoint& a, const FrontPoint& b) {
        return std::tuple(a.pda, a.mm_prime, a.trial_index) <
               std::tuple(b.pda, b.mm_prime, b.trial_index);
    });

    std::vector<FrontPoint> front;
    double best_mm = std::numeric_limits<double>::infinity();
    for (const FrontPoint& pt : sorted) {
        if (!front.empty() && front.back().pda == pt.pda && front.back().mm_prime == pt.mm_prime) {
            continue;  // duplicate coordinates, earliest trial already kept
        }
        if (pt.mm_prime < best_mm) {
            front.push_back(pt);
            best_mm = pt.mm_prime;
        }
    }
    return front;
}

Summary summarize(const std::vector<Trial>& history, double pda_exact,
                  const std::vector<std::pair<double, double>>& mm_ranges) {
    Summary summary;
    summary.pda_exact = pda_exact;
    summary.trials_total = history.size();

    std::vector<FrontPoint> points;
    points.reserve(history.size());
    double best_pdae = std::numeric_limits<double>::infinity();
    uint64_t best_trial = 0;
    for (const Trial& trial : history) {
        points.push_back({trial.cost.pda, trial.report.mm_prime, trial.index});
        if (trial.origin == Origin::random) {
            ++summary.trials_random;
        } else {
            ++summary.trials_tpe;
        }
        if (trial.pdae < best_pdae) {
            best_pdae = trial.pdae;
            best_trial = trial.index;
        }
    }
    summary.best_pdae = history.empty() ? 0.0 : best_pdae;
    summary.best_pdae_trial = best_trial;

    std::unordered_map<uint64_t, size_t> position;
    for (size_t i = 0; i < history.size(); ++i) {
        position[history[i].index] = i;
    }
    for (const FrontPoint& pt : pareto_front(points)) {
        const Trial& trial = history[position.at(pt.trial_index)];
        FrontRow row;
        row.trial_index = pt.trial_index;
        row.fingerprint = trial.fingerprint;
        row.pda = pt.pda;
        row.mm_prime = pt.mm_prime;
        row.pdae = trial.pdae;
        row.improvement_pct = pda_improvement(pda_exact, pt.pda);
        summary.front.push_back(std::move(row));
    }

    for (const auto& [lo, hi] : mm_ranges) {
        MmRangeRow row;
        row.lo = lo;
        row.hi = hi;
        row.best_pdae = std::numeric_limits<double>::infinity();
        row.best_mm_prime = std::numeric_limits<double>::infinity();
        for (const Trial& trial : history) {
            const double mm = trial.report.mm_prime;
            if (mm < lo || mm > hi) {
                continue;
            }
            ++row.count;
            row.best_mm_prime = std::min(row.best_mm_prime, mm);
            if (trial.pdae < row.best_pdae) {
                row.best_pdae = trial.pdae;
                row.best_trial = trial.index;
            }
        }
        summary.ranges.push_back(row);
    }
    return summary;
}

std::string render_summary(const Summary& summary) {
    std::ostringstream out;
    char line[256];

    out << "trials: " << summary.trials_total << " (random " << summary.trials_random << ", tpe "
        << summary.trials_tpe << ")\n";
    std::snprintf(line, sizeof(line), "exact pda: %.6g\n", summary.pda_exact);
    out << line;
    std::snprintf(line, sizeof(line), "best pdae: %.6g (trial %llu)\n", summary.best_pdae,
                  static_cast<unsigned long long>(summary.best_pdae_trial));
    out << line;

    out << "\npareto front (" << summary.front.size() << " points)\n";
    out << "  trial  fingerprint       pda          mm'          pdae         improvement\n";
    for (const FrontRow& row : summary.front) {
        std::snprintf(line, sizeof(line), "  %-6llu %-16s %-12.6g %-12.6g %-12.6g %+.2f%%\n",
                      static_cast<unsigned long long>(row.trial_index), row.fingerprint.c_str(),
                      row.pda, row.mm_prime, row.pdae, row.improvement_pct);
        out << line;
    }

    if (!summary.ranges.empty()) {
        out << "\nbest pdae by mm' range\n";
        for (const MmRangeRow& row : summary.ranges) {
            if (row.count == 0) {
                std::snprintf(line, sizeof(line), "  mm' in [%.3g, %.3g]: no candidate\n", row.lo,
                              row.hi);
            } else {
                std::snprintf(line, sizeof(line),
                              "  mm' in [%.3g, %.3g]: best pdae %.6g (trial %llu), min mm' %.6g, "
                              "%zu trial(s)\n",
                              row.lo, row.hi, row.best_pdae,
                              static_cast<unsigned long long>(*row.best_trial), row.best_mm_prime,
                              row.count);
            }
            out << line;
        }
    }
    return out.str();
}

}  // namespace approxmul
