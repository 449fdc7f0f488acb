#include "approxmul/trial_log.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace approxmul {

using nlohmann::json;

const char* sampler_name(Sampler sampler) {
    return sampler == Sampler::tpe ? "tpe" : "random";
}

Sampler sampler_from_name(const std::string& name) {
    if (name == "tpe") {
        return Sampler::tpe;
    }
    if (name == "random") {
        return Sampler::random;
    }
    throw std::invalid_argument("unknown sampler: " + name);
}

const char* rounding_name(KRounding rounding) {
    return rounding == KRounding::nearest ? "nearest" : "ceil";
}

KRounding rounding_from_name(const std::string& name) {
    if (name == "nearest") {
        return KRounding::nearest;
    }
    if (name == "ceil") {
        return KRounding::ceiling;
    }
    throw std::invalid_argument("unknown rounding mode: " + name);
}

std::string serialize_meta(const RunMeta& meta) {
    json record;
    record["type"] = "meta";
    record["n"] = meta.n;
    record["m"] = meta.m;
    record["r"] = meta.r;
    record["rounding"] = rounding_name(meta.rounding);
    record["seed"] = meta.seed;
    record["budget"] = meta.budget;
    record["batch"] = meta.batch;
    record["sampler"] = sampler_name(meta.sampler);
    record["cost_mode"] = meta.cost_mode;
    record["measurement_path"] = meta.measurement_path;
    record["n_startup"] = meta.tpe.n_startup;
    record["gamma"] = meta.tpe.gamma;
    record["prior_weight"] = meta.tpe.prior_weight;
    record["n_candidates"] = meta.tpe.n_candidates;
    record["exhaustive_cap_bits"] = meta.exhaustive_cap_bits;
    record["n_samples"] = meta.n_samples;
    return record.dump();
}

RunMeta parse_meta(const std::string& line) {
    const json record = json::parse(line);
    if (record.value("type", "") != "meta") {
        throw std::invalid_argument("not a meta record");
    }
    RunMeta meta;
    meta.n = record.at("n").get<int>();
    meta.m = record.at("m").get<int>();
    meta.r = record.at("r").get<double>();
    meta.rounding = rounding_from_name(record.at("rounding").get<std::string>());
    meta.seed = record.at("seed").get<uint64_t>();
    meta.budget = record.at("budget").get<uint64_t>();
    meta.batch = record.at("batch").get<int>();
    meta.sampler = sampler_from_name(record.at("sampler").get<std::string>());
    meta.cost_mode = record.at("cost_mode").get<std::string>();
    meta.measurement_path = record.at("measurement_path").get<std::string>();
    meta.tpe.n_startup = record.at("n_startup").get<int>();
    meta.tpe.gamma = record.at("gamma").get<double>();
    meta.tpe.prior_weight = record.at("prior_weight").get<double>();
    meta.tpe.n_candidates = record.at("n_candidates").get<int>();
    meta.exhaustive_cap_bits = record.at("exhaustive_cap_bits").get<int>();
    meta.n_samples = record.at("n_samples").get<uint64_t>();
    return meta;
}

std::string serialize_trial(const Trial& trial) {
    json record;
    record["type"] = "trial";
    record["index"] = trial.index;
    record["fingerprint"] = trial.fingerprint;
    record["options"] = trial.config.codes();
    record["mae"] = trial.report.mae;
    record["mse"] = trial.report.mse;
    record["mm_prime"] = trial.report.mm_prime;
    record["max_abs_error"] = trial.report.max_abs_error;
    record["sum_abs"] = trial.report.sum_abs;
    record["sum_sq"] = uint128_to_string(trial.report.sum_sq);
    record["samples"] = trial.report.samples;
    record["exhaustive"] = trial.report.exhaustive;
    record["area"] = trial.cost.area;
    record["delay"] = trial.cost.delay;
    record["power"] = trial.cost.power;
    record["pda"] = trial.cost.pda;
    record["cost_source"] = trial.cost.source == CostSource::proxy ? "proxy" : "external";
    record["pdae"] = trial.pdae;
    record["origin"] = origin_name(trial.origin);
    record["seed"] = trial.seed;
    return record.dump();
}

Trial parse_trial(const std::string& line) {
    const json record = json::parse(line);
    if (record.value("type", "") != "trial") {
        throw std::invalid_argument("not a trial record");
    }
    Trial trial;
    trial.index = record.at("index").get<uint64_t>();
    trial.fingerprint = record.at("fingerprint").get<std::string>();
    trial.config = ApproxConfig::from_codes(record.at("options").get<std::string>());
    trial.report.mae = record.at("mae").get<double>();
    trial.report.mse = record.at("mse").get<double>();
    trial.report.mm_prime = record.at("mm_prime").get<double>();
    trial.report.max_abs_error = record.at("max_abs_error").get<uint64_t>();
    trial.report.sum_abs = record.at("sum_abs").get<uint64_t>();
    trial.report.sum_sq = uint128_from_string(record.at("sum_sq").get<std::string>());
    trial.report.samples = record.at("samples").get<uint64_t>();
    trial.report.exhaustive = record.at("exhaustive").get<bool>();
    trial.cost.area = record.at("area").get<double>();
    trial.cost.delay = record.at("delay").get<double>();
    trial.cost.power = record.at("power").get<double>();
    trial.cost.pda = record.at("pda").get<double>();
    trial.cost.source = record.at("cost_source").get<std::string>() == "external"
                            ? CostSource::external
                            : CostSource::proxy;
    trial.pdae = record.at("pdae").get<double>();
    trial.origin = origin_from_name(record.at("origin").get<std::string>());
    trial.seed = record.at("seed").get<uint64_t>();
    return trial;
}

TrialLog read_trial_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open trial log: " + path.string());
    }
    TrialLog log;
    bool meta_seen = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const json record = json::parse(line);
            const std::string type = record.value("type", "");
            if (type == "meta") {
                log.meta = parse_meta(line);
                meta_seen = true;
            } else if (type == "trial") {
                log.trials.push_back(parse_trial(line));
            } else {
                log.warnings.push_back(path.string() + ":" + std::to_string(line_no) +
                                       ": unknown record type, skipped");
            }
        } catch (const std::exception& e) {
            log.warnings.push_back(path.string() + ":" + std::to_string(line_no) +
                                   ": corrupt line skipped (" + e.what() + ")");
        }
    }
    if (!meta_seen) {
        log.warnings.push_back(path.string() + ": no meta record found");
    }
    return log;
}

}  // namespace approxmul
