#include "approxmul/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace approxmul {

namespace {

// ceil(gamma * n) with integral values snapped before the ceiling so FP
// noise cannot bump the count.
size_t ceil_fraction(double gamma, size_t n) {
    double t = gamma * static_cast<double>(n);
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < 1e-9) {
        t = nearest;
    }
    return static_cast<size_t>(std::ceil(t));
}

double canonical_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t space_size(int k) {
    if (k >= 32) {
        return UINT64_MAX;
    }
    return uint64_t{1} << (2 * k);
}

int sample_categorical(const std::array<double, 4>& probs, std::mt19937_64& rng) {
    const double u = canonical_u01(rng);
    double cum = 0.0;
    for (int c = 0; c < 3; ++c) {
        cum += probs[c];
        if (u < cum) {
            return c;
        }
    }
    return 3;
}

}  // namespace

ApproxConfig random_config(int k, std::mt19937_64& rng) {
    ApproxConfig config;
    config.assignments.reserve(static_cast<size_t>(k));
    for (int d = 0; d < k; ++d) {
        config.assignments.push_back(static_cast<HaOption>(rng() & 3));
    }
    return config;
}

GoodBadSplit split_good_bad(const std::vector<Trial>& history, double gamma) {
    if (history.empty()) {
        throw std::invalid_argument("cannot split an empty history");
    }
    std::vector<size_t> order(history.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::pair(history[a].pdae, history[a].index) <
               std::pair(history[b].pdae, history[b].index);
    });
    const size_t n_good = ceil_fraction(gamma, history.size());
    GoodBadSplit split;
    split.good.assign(order.begin(), order.begin() + static_cast<ptrdiff_t>(n_good));
    split.bad.assign(order.begin() + static_cast<ptrdiff_t>(n_good), order.end());
    return split;
}

std::array<double, 4> categorical_density(const std::array<uint64_t, 4>& counts,
                                          double prior_weight) {
    if (!(prior_weight > 0.0)) {
        throw std::invalid_argument("prior_weight must be positive");
    }
    const double total =
        static_cast<double>(counts[0] + counts[1] + counts[2] + counts[3]) + 4.0 * prior_weight;
    std::array<double, 4> probs;
    for (int c = 0; c < 4; ++c) {
        probs[c] = (static_cast<double>(counts[c]) + prior_weight) / total;
    }
    return probs;
}

std::vector<ApproxConfig> tpe_suggest(const std::vector<Trial>& history, int k,
                                      const TpeParams& params, int batch, std::mt19937_64& rng) {
    if (batch < 1) {
        throw std::invalid_argument("batch must be at least 1");
    }
    if (history.empty()) {
        std::vector<ApproxConfig> fallback;
        for (int i = 0; i < batch; ++i) {
            fallback.push_back(random_config(k, rng));
        }
        return fallback;
    }

    const GoodBadSplit split = split_good_bad(history, params.gamma);
    std::vector<std::array<double, 4>> good_density(static_cast<size_t>(k));
    std::vector<std::array<double, 4>> bad_density(static_cast<size_t>(k));
    for (int d = 0; d < k; ++d) {
        std::array<uint64_t, 4> good_counts{};
        std::array<uint64_t, 4> bad_counts{};
        for (size_t i : split.good) {
            ++good_counts[static_cast<size_t>(history[i].config.assignments[d])];
        }
        for (size_t i : split.bad) {
            ++bad_counts[static_cast<size_t>(history[i].config.assignments[d])];
        }
        good_density[d] = categorical_density(good_counts, params.prior_weight);
        bad_density[d] = categorical_density(bad_counts, params.prior_weight);
    }

    std::unordered_set<std::string> seen;
    for (const Trial& trial : history) {
        seen.insert(trial.config.codes());
    }

    struct Candidate {
        ApproxConfig config;
        double score;
        size_t draw_order;
    };
    const size_t n_draws = static_cast<size_t>(params.n_candidates) * batch;
    std::vector<Candidate> candidates;
    candidates.reserve(n_draws);
    for (size_t i = 0; i < n_draws; ++i) {
        ApproxConfig config;
        config.assignments.reserve(static_cast<size_t>(k));
        double score = 0.0;
        for (int d = 0; d < k; ++d) {
            const int c = sample_categorical(good_density[d], rng);
            config.assignments.push_back(static_cast<HaOption>(c));
            score += std::log(good_density[d][static_cast<size_t>(c)]) -
                     std::log(bad_density[d][static_cast<size_t>(c)]);
        }
        candidates.push_back({std::move(config), score, i});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::pair(-a.score, a.draw_order) < std::pair(-b.score, b.draw_order);
    });

    std::vector<ApproxConfig> picked;
    for (const Candidate& cand : candidates) {
        if (static_cast<int>(picked.size()) == batch) {
            break;
        }
        const std::string codes = cand.config.codes();
        if (seen.insert(codes).second) {
            picked.push_back(cand.config);
        }
    }

    // Pad with random configs; repeat only once every config has been seen.
    const uint64_t space = space_size(k);
    while (static_cast<int>(picked.size()) < batch) {
        if (seen.size() >= space) {
            picked.push_back(random_config(k, rng));
            continue;
        }
        ApproxConfig config = random_config(k, rng);
        if (seen.insert(config.codes()).second) {
            picked.push_back(std::move(config));
        }
    }
    return picked;
}

namespace {

Trial evaluate_trial(const SearchPlan& plan, const CostModel& cost_model,
                     const SearchOptions& options, ApproxConfig config, uint64_t index,
                     Origin origin) {
    Trial trial;
    trial.index = index;
    trial.origin = origin;
    trial.seed = options.seed;
    trial.fingerprint = fingerprint(plan, config);
    if (plan.spec.product_bits() <= options.exhaustive_cap_bits) {
        trial.report = error_metrics_exhaustive(plan, config, options.exhaustive_cap_bits);
    } else {
        trial.report = error_metrics_sampled(plan, config, options.n_samples, options.seed);
    }
    trial.cost = cost_model.cost(plan, config);
    trial.pdae = pdae(trial.cost.pda, trial.report.mae, trial.report.mse);
    trial.config = std::move(config);
    return trial;
}

}  // namespace

std::vector<Trial> run_search(const SearchPlan& plan, const CostModel& cost_model,
                              const SearchOptions& options, const TrialSink& sink,
                              const std::vector<Trial>* resume_from) {
    if (options.budget < 1) {
        throw std::invalid_argument("budget must be at least 1");
    }
    if (options.workers < 1) {
        throw std::invalid_argument("workers must be at least 1");
    }
    const int batch = options.batch > 0 ? options.batch : options.workers;
    const uint64_t n_startup =
        options.tpe.n_startup > 0
            ? static_cast<uint64_t>(options.tpe.n_startup)
            : std::max<uint64_t>(10, options.budget / 20);
    const int k = plan.k();

    std::mt19937_64 rng(options.seed);
    std::vector<Trial> history;
    history.reserve(options.budget);

    while (history.size() < options.budget) {
        const int round_size =
            static_cast<int>(std::min<uint64_t>(static_cast<uint64_t>(batch),
                                                options.budget - history.size()));
        Origin origin;
        std::vector<ApproxConfig> suggestions;
        if (options.sampler == Sampler::random || history.size() < n_startup) {
            origin = Origin::random;
            suggestions.reserve(static_cast<size_t>(round_size));
            for (int i = 0; i < round_size; ++i) {
                suggestions.push_back(random_config(k, rng));
            }
        } else {
            origin = Origin::tpe;
            suggestions = tpe_suggest(history, k, options.tpe, round_size, rng);
        }

        // Trials already persisted by an interrupted run are replayed, not
        // re-evaluated; the suggestion stream must line up fingerprint for
        // fingerprint or the resume state is inconsistent.
        std::vector<Trial> round(suggestions.size());
        std::vector<bool> needs_eval(suggestions.size(), true);
        for (size_t i = 0; i < suggestions.size(); ++i) {
            const uint64_t index = history.size() + i;
            if (resume_from != nullptr && index < resume_from->size()) {
                const Trial& prior = (*resume_from)[index];
                if (prior.fingerprint != fingerprint(plan, suggestions[i])) {
                    throw std::runtime_error(
                        "resume mismatch at trial " + std::to_string(index) +
                        ": logged fingerprint " + prior.fingerprint +
                        " does not match the replayed suggestion");
                }
                round[i] = prior;
                needs_eval[i] = false;
            }
        }

        std::atomic<size_t> cursor{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            for (;;) {
                const size_t i = cursor.fetch_add(1);
                if (i >= suggestions.size()) {
                    return;
                }
                if (!needs_eval[i]) {
                    continue;
                }
                try {
                    round[i] = evaluate_trial(plan, cost_model, options, suggestions[i],
                                              history.size() + i, origin);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    return;
                }
            }
        };
        const int n_threads = std::min<int>(options.workers, round_size);
        if (n_threads <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<size_t>(n_threads));
            for (int t = 0; t < n_threads; ++t) {
                pool.emplace_back(work);
            }
            for (std::thread& t : pool) {
                t.join();
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }

        for (size_t i = 0; i < round.size(); ++i) {
            if (needs_eval[i] && sink) {
                sink(round[i]);
            }
            history.push_back(std::move(round[i]));
        }
    }
    return history;
}

const char* origin_name(Origin origin) {
    return origin == Origin::random ? "random" : "tpe";
}

Origin origin_from_name(const std::string& name) {
    if (name == "random") {
        return Origin::random;
    }
    if (name == "tpe") {
        return Origin::tpe;
    }
    throw std::invalid_argument("unknown trial origin: " + name);
}

}  // namespace approxmul
