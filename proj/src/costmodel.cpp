#include "approxmul/costmodel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace approxmul {

namespace {

uint64_t fnv1a64(const std::string& data) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

int ceil_log2(int value) {
    int levels = 0;
    while ((1 << levels) < value) {
        ++levels;
    }
    return levels;
}

}  // namespace

std::string fingerprint(const SearchPlan& plan, const ApproxConfig& config) {
    check_config(plan, config);
    // Canonical form: widths, rounding mode, then each searched slot in plan
    // order (already sorted by (weight, pair, col)) with its option code.
    std::string canon = "n=" + std::to_string(plan.spec.n) + ";m=" + std::to_string(plan.spec.m) +
                        ";k=" + std::to_string(plan.k()) + ";";
    for (size_t i = 0; i < plan.searched.size(); ++i) {
        const HaSlot& slot = plan.searched[i];
        canon += std::to_string(slot.pair) + "." + std::to_string(slot.col) + "=";
        canon += option_code(config.assignments[i]);
        canon += ";";
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return buffer;
}

CostBreakdown proxy_cost(const SearchPlan& plan, const ApproxConfig& config) {
    check_config(plan, config);

    double slot_luts = static_cast<double>(plan.reserved_exact.size());
    for (HaOption opt : config.assignments) {
        if (opt == HaOption::Exact || opt == HaOption::OrSum) {
            slot_luts += 1.0;
        }
    }

    const int rows = 2 * (plan.spec.n / 2) + (plan.spec.n % 2);

    CostBreakdown cost;
    cost.area = slot_luts + static_cast<double>(compressed_bit_count(plan, config));
    cost.delay = 1.0 + static_cast<double>(ceil_log2(rows));
    cost.power = cost.area;
    cost.pda = cost.area * cost.delay * cost.power;
    cost.source = CostSource::proxy;
    return cost;
}

double pdae(double pda, double mae, double mse) {
    if (!(pda > 0.0)) {
        throw std::invalid_argument("pda must be positive");
    }
    return pda * std::log2(mae * mse + 1.0);
}

double pda_improvement(double pda_exact, double pda_approx) {
    if (!(pda_exact > 0.0)) {
        throw std::invalid_argument("pda_exact must be positive");
    }
    return (pda_exact - pda_approx) / pda_exact * 100.0;
}

MeasurementTable load_measurements(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open measurement file: " + path.string());
    }

    MeasurementTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed measurement record");
        }
        for (const char* field : {"fingerprint", "area", "delay", "power"}) {
            if (!record.contains(field)) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": missing field '" + field + "'");
            }
        }
        const std::string fp = record["fingerprint"].get<std::string>();
        CostBreakdown cost;
        cost.area = record["area"].get<double>();
        cost.delay = record["delay"].get<double>();
        cost.power = record["power"].get<double>();
        if (!(cost.area > 0.0) || !(cost.delay > 0.0) || !(cost.power > 0.0)) {
            table.warnings.push_back(path.string() + ":" + std::to_string(line_no) +
                                     ": rejected record with non-positive area/delay/power");
            continue;
        }
        cost.pda = cost.area * cost.delay * cost.power;
        cost.source = CostSource::external;
        if (table.entries.count(fp) != 0) {
            table.warnings.push_back(path.string() + ":" + std::to_string(line_no) +
                                     ": duplicate fingerprint " + fp + ", last entry wins");
        }
        table.entries[fp] = cost;
    }
    return table;
}

CostBreakdown ExternalCostModel::cost(const SearchPlan& plan, const ApproxConfig& config) const {
    const std::string fp = fingerprint(plan, config);
    auto it = table_.entries.find(fp);
    if (it == table_.entries.end()) {
        throw UnmeasuredConfig("no external measurement for fingerprint " + fp +
                               " (options " + config.codes() + ")");
    }
    return it->second;
}

}  // namespace approxmul
