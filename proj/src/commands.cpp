#include "approxmul/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "approxmul/codegen.hpp"
#include "approxmul/costmodel.hpp"
#include "approxmul/errmetrics.hpp"
#include "approxmul/pareto.hpp"

namespace approxmul {

namespace {

std::vector<std::pair<double, double>> default_mm_ranges() {
    return {{1e3, 1e7}, {1e3, 1e8}, {1e4, 1e7}, {1e4, 1e8}};
}

RunMeta meta_from_config(const RunConfig& config) {
    RunMeta meta;
    meta.n = config.n;
    meta.m = config.m;
    meta.r = config.r;
    meta.rounding = config.rounding;
    meta.seed = config.seed;
    meta.budget = config.budget;
    meta.batch = config.batch > 0 ? config.batch : config.workers;
    meta.sampler = config.sampler;
    meta.cost_mode = config.cost_mode;
    meta.measurement_path = config.measurement_path;
    meta.tpe = config.tpe;
    meta.exhaustive_cap_bits = config.exhaustive_cap_bits;
    meta.n_samples = config.n_samples;
    return meta;
}

// Everything that shapes the trial sequence must agree for --resume;
// budget may grow between invocations.
std::optional<std::string> meta_mismatch(const RunMeta& logged, const RunMeta& wanted) {
    auto mismatch = [](const std::string& field) {
        return std::optional<std::string>("logged run differs in " + field);
    };
    if (logged.n != wanted.n || logged.m != wanted.m) return mismatch("bit widths");
    if (logged.r != wanted.r) return mismatch("r");
    if (logged.rounding != wanted.rounding) return mismatch("rounding");
    if (logged.seed != wanted.seed) return mismatch("seed");
    if (logged.batch != wanted.batch) return mismatch("batch");
    if (logged.sampler != wanted.sampler) return mismatch("sampler");
    if (logged.cost_mode != wanted.cost_mode) return mismatch("cost mode");
    if (logged.measurement_path != wanted.measurement_path) return mismatch("measurement path");
    if (logged.tpe.n_startup != wanted.tpe.n_startup) return mismatch("n_startup");
    if (logged.tpe.gamma != wanted.tpe.gamma) return mismatch("gamma");
    if (logged.tpe.prior_weight != wanted.tpe.prior_weight) return mismatch("prior_weight");
    if (logged.tpe.n_candidates != wanted.tpe.n_candidates) return mismatch("n_candidates");
    if (logged.exhaustive_cap_bits != wanted.exhaustive_cap_bits) return mismatch("cap bits");
    if (logged.n_samples != wanted.n_samples) return mismatch("n_samples");
    return std::nullopt;
}

std::unique_ptr<CostModel> make_cost_model(const std::string& cost_mode,
                                           const std::string& measurement_path,
                                           std::ostream& err) {
    if (cost_mode == "proxy") {
        return std::make_unique<ProxyCostModel>();
    }
    MeasurementTable table = load_measurements(measurement_path);
    for (const std::string& warning : table.warnings) {
        err << "warning: " << warning << "\n";
    }
    return std::make_unique<ExternalCostModel>(std::move(table));
}

SearchPlan plan_from_meta(const RunMeta& meta) {
    if (meta.n == 0 && meta.m == 0) {
        throw std::runtime_error("trial log has no usable meta record");
    }
    return select_search_set(MultSpec(meta.n, meta.m), meta.r, meta.rounding);
}

// The log must hold trials 0..N-1 in order to be resumed or emitted from.
void require_contiguous(const TrialLog& log) {
    for (size_t i = 0; i < log.trials.size(); ++i) {
        if (log.trials[i].index != i) {
            throw std::runtime_error("trial log is not a contiguous index sequence (position " +
                                     std::to_string(i) + " holds trial " +
                                     std::to_string(log.trials[i].index) + ")");
        }
    }
}

}  // namespace

void RunConfig::validate() const {
    std::vector<std::string> problems;
    if (n < 2 || m < 2) {
        problems.push_back("bit widths must satisfy n >= 2 and m >= 2");
    } else if (n + m > 62) {
        problems.push_back("product width n+m must not exceed 62 bits");
    }
    if (!(r >= 0.0 && r <= 1.0)) {
        problems.push_back("r must lie in [0,1]");
    }
    if (budget < 1) {
        problems.push_back("budget must be at least 1");
    }
    if (workers < 1) {
        problems.push_back("workers must be at least 1");
    }
    if (batch < 0) {
        problems.push_back("batch must be positive (or 0 to track workers)");
    }
    if (cost_mode != "proxy" && cost_mode != "external") {
        problems.push_back("cost mode must be 'proxy' or 'external'");
    }
    if (cost_mode == "external" && measurement_path.empty()) {
        problems.push_back("external cost mode requires a measurement file");
    }
    if (!(tpe.gamma > 0.0 && tpe.gamma < 1.0)) {
        problems.push_back("gamma must lie in (0,1)");
    }
    if (!(tpe.prior_weight > 0.0)) {
        problems.push_back("prior weight must be positive");
    }
    if (tpe.n_candidates < 1) {
        problems.push_back("candidate count must be at least 1");
    }
    if (tpe.n_startup < 0) {
        problems.push_back("startup trial count must be non-negative");
    }
    if (n_samples < 1) {
        problems.push_back("sample count must be at least 1");
    }
    if (!problems.empty()) {
        std::string joined = "invalid configuration: ";
        for (size_t i = 0; i < problems.size(); ++i) {
            joined += (i > 0 ? "; " : "") + problems[i];
        }
        throw UsageError(joined);
    }
}

int cmd_search(const RunConfig& config, std::ostream& out, std::ostream& err) {
    config.validate();
    const RunMeta meta = meta_from_config(config);
    const SearchPlan plan = plan_from_meta(meta);
    if (plan.k() == 0) {
        err << "warning: r=" << config.r
            << " searches zero half adders; every trial is the all-Exact configuration\n";
    }

    const std::unique_ptr<CostModel> cost_model =
        make_cost_model(config.cost_mode, config.measurement_path, err);

    std::filesystem::create_directories(config.output_dir);
    const std::filesystem::path log_path = config.output_dir / "trials.jsonl";

    std::vector<Trial> preloaded;
    bool appending = false;
    if (config.resume && std::filesystem::exists(log_path)) {
        TrialLog log = read_trial_log(log_path);
        for (const std::string& warning : log.warnings) {
            err << "warning: " << warning << "\n";
        }
        if (const auto why = meta_mismatch(log.meta, meta)) {
            throw std::runtime_error("cannot resume " + log_path.string() + ": " + *why);
        }
        require_contiguous(log);
        preloaded = std::move(log.trials);
        appending = true;
        if (preloaded.size() >= config.budget) {
            out << "log already holds " << preloaded.size() << " trials (budget "
                << config.budget << "); nothing to do\n";
            return 0;
        }
    }

    std::ofstream log_file(log_path, appending ? std::ios::app : std::ios::trunc);
    if (!log_file) {
        throw std::runtime_error("cannot write trial log: " + log_path.string());
    }
    if (!appending) {
        log_file << serialize_meta(meta) << "\n";
        log_file.flush();
    }

    SearchOptions options;
    options.budget = config.budget;
    options.seed = config.seed;
    options.workers = config.workers;
    options.batch = meta.batch;
    options.sampler = config.sampler;
    options.tpe = config.tpe;
    options.exhaustive_cap_bits = config.exhaustive_cap_bits;
    options.n_samples = config.n_samples;

    const auto started = std::chrono::steady_clock::now();
    TrialSink sink = [&](const Trial& trial) {
        log_file << serialize_trial(trial) << "\n";
        log_file.flush();
    };
    const std::vector<Trial> history =
        run_search(plan, *cost_model, options, sink, preloaded.empty() ? nullptr : &preloaded);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    double best_pdae = std::numeric_limits<double>::infinity();
    uint64_t best_index = 0;
    for (const Trial& trial : history) {
        if (trial.pdae < best_pdae) {
            best_pdae = trial.pdae;
            best_index = trial.index;
        }
    }
    out << "completed " << history.size() << " trials (" << preloaded.size() << " resumed) in "
        << std::fixed << std::setprecision(2) << elapsed << "s\n";
    out.unsetf(std::ios::fixed);
    out << "best pdae " << best_pdae << " at trial " << best_index << "\n";
    out << "trial log: " << log_path.string() << "\n";
    return 0;
}

int cmd_pareto(const std::filesystem::path& log_path, const std::filesystem::path& output_dir,
               const std::vector<std::pair<double, double>>& mm_ranges, std::ostream& out,
               std::ostream& err) {
    TrialLog log = read_trial_log(log_path);
    for (const std::string& warning : log.warnings) {
        err << "warning: " << warning << "\n";
    }
    if (!log.warnings.empty()) {
        err << log.warnings.size() << " line(s) skipped\n";
    }

    std::filesystem::create_directories(output_dir);
    const std::filesystem::path front_path = output_dir / "front.jsonl";
    const std::filesystem::path summary_path = output_dir / "summary.txt";
    const std::filesystem::path scatter_path = output_dir / "scatter.csv";

    if (log.trials.empty()) {
        std::ofstream(front_path) << "";
        std::ofstream(summary_path) << "no trials\n";
        std::ofstream(scatter_path) << "trial_index,pda,mm_prime,pdae,on_front\n";
        err << "warning: " << log_path.string() << " contains no trials; empty report written\n";
        return 2;
    }

    const SearchPlan plan = plan_from_meta(log.meta);
    const ApproxConfig all_exact = ApproxConfig::all(HaOption::Exact, plan.k());
    const std::unique_ptr<CostModel> cost_model =
        make_cost_model(log.meta.cost_mode, log.meta.measurement_path, err);
    const double pda_exact = cost_model->cost(plan, all_exact).pda;

    const Summary summary = summarize(log.trials, pda_exact, mm_ranges);

    std::ofstream front_file(front_path);
    for (const FrontRow& row : summary.front) {
        nlohmann::json record;
        record["trial_index"] = row.trial_index;
        record["fingerprint"] = row.fingerprint;
        record["pda"] = row.pda;
        record["mm_prime"] = row.mm_prime;
        record["pdae"] = row.pdae;
        record["improvement_pct"] = row.improvement_pct;
        front_file << record.dump() << "\n";
    }

    std::ofstream summary_file(summary_path);
    const std::string rendered = render_summary(summary);
    summary_file << rendered;

    std::unordered_set<uint64_t> on_front;
    for (const FrontRow& row : summary.front) {
        on_front.insert(row.trial_index);
    }
    std::ofstream scatter_file(scatter_path);
    scatter_file << "trial_index,pda,mm_prime,pdae,on_front\n";
    char line[160];
    for (const Trial& trial : log.trials) {
        std::snprintf(line, sizeof(line), "%llu,%.17g,%.17g,%.17g,%d\n",
                      static_cast<unsigned long long>(trial.index), trial.cost.pda,
                      trial.report.mm_prime, trial.pdae, on_front.count(trial.index) ? 1 : 0);
        scatter_file << line;
    }

    out << rendered;
    out << "\nfront: " << front_path.string() << "\nsummary: " << summary_path.string()
        << "\nscatter: " << scatter_path.string() << "\n";
    return 0;
}

int cmd_emit(const std::filesystem::path& log_path, const EmitSelector& selector,
             const std::filesystem::path& output_dir, std::ostream& out, std::ostream& err) {
    TrialLog log = read_trial_log(log_path);
    for (const std::string& warning : log.warnings) {
        err << "warning: " << warning << "\n";
    }
    if (log.trials.empty()) {
        throw std::runtime_error(log_path.string() + " contains no trials");
    }
    const SearchPlan plan = plan_from_meta(log.meta);

    std::map<uint64_t, const Trial*> by_index;
    for (const Trial& trial : log.trials) {
        by_index[trial.index] = &trial;
    }

    std::vector<uint64_t> selected;
    if (selector.front) {
        std::vector<FrontPoint> points;
        for (const Trial& trial : log.trials) {
            points.push_back({trial.cost.pda, trial.report.mm_prime, trial.index});
        }
        for (const FrontPoint& pt : pareto_front(points)) {
            selected.push_back(pt.trial_index);
        }
    } else {
        selected = selector.trial_indices;
    }
    if (selected.empty()) {
        throw std::runtime_error("nothing selected: pass --front or --trials");
    }
    for (uint64_t index : selected) {
        if (by_index.count(index) == 0) {
            throw std::runtime_error("unknown trial index " + std::to_string(index));
        }
    }

    std::filesystem::create_directories(output_dir);
    const std::string size_tag = std::to_string(plan.spec.n) + "x" + std::to_string(plan.spec.m);

    const RtlArtifact exact = emit_exact(plan.spec, "exact_mul_" + size_tag);
    std::ofstream(output_dir / (exact.module_name + ".v")) << exact.text;
    out << "wrote " << (output_dir / (exact.module_name + ".v")).string() << "\n";

    for (uint64_t index : selected) {
        const Trial& trial = *by_index.at(index);
        const std::string name = "approx_mul_" + size_tag + "_t" + std::to_string(index);
        const RtlArtifact approx =
            emit_approx(plan, trial.config, name, &trial.report, &trial.cost);
        if (approx.fingerprint != trial.fingerprint) {
            throw std::runtime_error("fingerprint mismatch for trial " + std::to_string(index) +
                                     ": log has " + trial.fingerprint + ", emitter computed " +
                                     approx.fingerprint);
        }
        const RtlArtifact bench = emit_testbench(plan.spec, name, exact.module_name);
        std::ofstream(output_dir / (approx.module_name + ".v")) << approx.text;
        std::ofstream(output_dir / (bench.module_name + ".v")) << bench.text;
        out << "wrote " << (output_dir / (approx.module_name + ".v")).string() << "\n";
        out << "wrote " << (output_dir / (bench.module_name + ".v")).string() << "\n";
    }
    return 0;
}

int cmd_eval(const EvalRequest& request, std::ostream& out, std::ostream& err) {
    (void)err;
    MultSpec spec(request.n, request.m);
    if (!(request.r >= 0.0 && request.r <= 1.0)) {
        throw UsageError("r must lie in [0,1]");
    }
    const SearchPlan plan = select_search_set(spec, request.r, request.rounding);
    if (request.option_codes.size() != static_cast<size_t>(plan.k())) {
        throw UsageError("option string has " + std::to_string(request.option_codes.size()) +
                         " symbols but r=" + std::to_string(request.r) + " searches " +
                         std::to_string(plan.k()) + " slots");
    }
    ApproxConfig config;
    try {
        config = ApproxConfig::from_codes(request.option_codes);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    ErrorReport report;
    if (spec.product_bits() <= request.exhaustive_cap_bits) {
        report = error_metrics_exhaustive(plan, config, request.exhaustive_cap_bits);
    } else {
        report = error_metrics_sampled(plan, config, request.n_samples, request.seed);
    }
    const CostBreakdown cost = proxy_cost(plan, config);
    const double pdae_value = pdae(cost.pda, report.mae, report.mse);

    out << "spec: " << spec.n << "x" << spec.m << "  r=" << plan.r << "  k=" << plan.k()
        << "  options=" << (plan.k() > 0 ? config.codes() : std::string("(none)")) << "\n";
    out << "fingerprint: " << fingerprint(plan, config) << "\n";
    out << "mae=" << report.mae << "  mse=" << report.mse << "  mm_prime=" << report.mm_prime
        << "  max_abs_error=" << report.max_abs_error << "\n";
    out << "sum_abs=" << report.sum_abs << "  sum_sq=" << uint128_to_string(report.sum_sq)
        << "  samples=" << report.samples << "  exhaustive=" << (report.exhaustive ? "yes" : "no")
        << "\n";
    out << "area=" << cost.area << "  delay=" << cost.delay << "  power=" << cost.power
        << "  pda=" << cost.pda << "  pdae=" << pdae_value << "\n";

    nlohmann::json record;
    record["n"] = spec.n;
    record["m"] = spec.m;
    record["r"] = plan.r;
    record["options"] = config.codes();
    record["fingerprint"] = fingerprint(plan, config);
    record["mae"] = report.mae;
    record["mse"] = report.mse;
    record["mm_prime"] = report.mm_prime;
    record["max_abs_error"] = report.max_abs_error;
    record["samples"] = report.samples;
    record["exhaustive"] = report.exhaustive;
    record["area"] = cost.area;
    record["delay"] = cost.delay;
    record["power"] = cost.power;
    record["pda"] = cost.pda;
    record["pdae"] = pdae_value;
    out << record.dump() << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& base, std::ostream& out, std::ostream& err) {
    static const std::vector<std::pair<double, const char*>> schedule = {
        {0.3, "r0.3"}, {0.4, "r0.4"}, {0.5, "r0.5"}, {0.6, "r0.6"}, {0.7, "r0.7"},
    };
    for (const auto& [r, tag] : schedule) {
        RunConfig config = base;
        config.r = r;
        config.output_dir = base.output_dir / tag;
        out << "=== sweep " << tag << " ===\n";
        const int status = cmd_search(config, out, err);
        if (status != 0) {
            return status;
        }
    }
    return 0;
}

namespace {

std::vector<std::pair<double, double>> parse_mm_ranges(const std::vector<std::string>& specs) {
    std::vector<std::pair<double, double>> ranges;
    for (const std::string& text : specs) {
        const size_t colon = text.find(':');
        if (colon == std::string::npos) {
            throw UsageError("mm' range must look like LO:HI, got '" + text + "'");
        }
        try {
            const double lo = std::stod(text.substr(0, colon));
            const double hi = std::stod(text.substr(colon + 1));
            if (!(lo <= hi)) {
                throw UsageError("mm' range bounds out of order in '" + text + "'");
            }
            ranges.emplace_back(lo, hi);
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception&) {
            throw UsageError("cannot parse mm' range '" + text + "'");
        }
    }
    return ranges;
}

void add_search_flags(CLI::App* cmd, RunConfig& config, bool with_r) {
    cmd->add_option("--n", config.n, "bit width of operand y (PP rows)");
    cmd->add_option("--m", config.m, "bit width of operand x (PP columns)");
    if (with_r) {
        cmd->add_option("--r", config.r, "desired area-reduction fraction in [0,1]");
    }
    cmd->add_option("--budget", config.budget, "number of trials to evaluate");
    cmd->add_option("--seed", config.seed, "random seed");
    cmd->add_option("--workers", config.workers, "parallel evaluation workers");
    cmd->add_option("--batch", config.batch, "suggestions per round (default: workers)");
    cmd->add_option("--sampler", [&config](const std::vector<std::string>& vals) {
            config.sampler = sampler_from_name(vals.at(0));
            return true;
        }, "tpe (default) or random")->type_name("NAME");
    cmd->add_option("--rounding", [&config](const std::vector<std::string>& vals) {
            config.rounding = rounding_from_name(vals.at(0));
            return true;
        }, "K rounding: nearest (default) or ceil")->type_name("MODE");
    cmd->add_option("--cost-mode", config.cost_mode, "proxy (default) or external");
    cmd->add_option("--measurements", config.measurement_path,
                    "measurement file for external cost mode");
    cmd->add_option("--out", config.output_dir, "output directory");
    cmd->add_flag("--resume", config.resume, "continue an interrupted run");
    cmd->add_option("--n-startup", config.tpe.n_startup,
                    "random trials before TPE (0 = max(10, budget/20))");
    cmd->add_option("--gamma", config.tpe.gamma, "good-trial fraction");
    cmd->add_option("--prior-weight", config.tpe.prior_weight, "density smoothing weight");
    cmd->add_option("--n-candidates", config.tpe.n_candidates, "candidate draws per suggestion");
    cmd->add_option("--cap-bits", config.exhaustive_cap_bits,
                    "max n+m evaluated exhaustively");
    cmd->add_option("--samples", config.n_samples, "sample count beyond the exhaustive cap");
}

int apply_worker_env(RunConfig& config, std::ostream& err) {
    const char* env = std::getenv("APPROXMUL_WORKERS");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        const int workers = std::stoi(env);
        if (workers < 1) {
            throw std::invalid_argument("workers < 1");
        }
        config.workers = workers;
    } catch (const std::exception&) {
        err << "warning: ignoring APPROXMUL_WORKERS='" << env << "'\n";
    }
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"approximate unsigned multiplier generator"};
    app.require_subcommand(1);

    RunConfig search_config;
    CLI::App* search = app.add_subcommand("search", "run the TPE search and log trials");
    add_search_flags(search, search_config, true);

    std::string pareto_log;
    std::string pareto_out = ".";
    std::vector<std::string> pareto_ranges;
    CLI::App* pareto = app.add_subcommand("pareto", "extract the Pareto front from a trial log");
    pareto->add_option("--log", pareto_log, "trial log path")->required();
    pareto->add_option("--out", pareto_out, "output directory");
    pareto->add_option("--mm-ranges", pareto_ranges,
                       "mm' filters as LO:HI (default: the four standard ranges)")
        ->delimiter(',');

    std::string emit_log;
    std::string emit_out = ".";
    EmitSelector selector;
    CLI::App* emit = app.add_subcommand("emit", "emit Verilog for selected trials");
    emit->add_option("--log", emit_log, "trial log path")->required();
    emit->add_option("--out", emit_out, "output directory");
    emit->add_flag("--front", selector.front, "emit every Pareto-front trial");
    emit->add_option("--trials", selector.trial_indices, "explicit trial indices")
        ->delimiter(',');

    EvalRequest eval_request;
    CLI::App* eval = app.add_subcommand("eval", "evaluate one configuration");
    eval->add_option("--n", eval_request.n, "bit width of operand y");
    eval->add_option("--m", eval_request.m, "bit width of operand x");
    eval->add_option("--r", eval_request.r, "area-reduction fraction");
    eval->add_option("--rounding", [&eval_request](const std::vector<std::string>& vals) {
            eval_request.rounding = rounding_from_name(vals.at(0));
            return true;
        }, "K rounding: nearest (default) or ceil")->type_name("MODE");
    eval->add_option("--options", eval_request.option_codes,
                     "one symbol per searched slot: E, O, D, X")
        ->required();
    eval->add_option("--seed", eval_request.seed, "seed for sampled metrics");
    eval->add_option("--cap-bits", eval_request.exhaustive_cap_bits,
                     "max n+m evaluated exhaustively");
    eval->add_option("--samples", eval_request.n_samples,
                     "sample count beyond the exhaustive cap");

    RunConfig sweep_config;
    CLI::App* sweep = app.add_subcommand("sweep",
                                         "run search over r in {0.3, 0.4, 0.5, 0.6, 0.7}");
    add_search_flags(sweep, sweep_config, false);

    std::vector<const char*> argv;
    argv.push_back("approxmul");
    for (const std::string& arg : args) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        // thrown by option callbacks (--rounding, --sampler)
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (search->parsed()) {
            apply_worker_env(search_config, err);
            return cmd_search(search_config, out, err);
        }
        if (pareto->parsed()) {
            const auto ranges =
                pareto_ranges.empty() ? default_mm_ranges() : parse_mm_ranges(pareto_ranges);
            return cmd_pareto(pareto_log, pareto_out, ranges, out, err);
        }
        if (emit->parsed()) {
            return cmd_emit(emit_log, selector, emit_out, out, err);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_request, out, err);
        }
        if (sweep->parsed()) {
            apply_worker_env(sweep_config, err);
            return cmd_sweep(sweep_config, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace approxmul
