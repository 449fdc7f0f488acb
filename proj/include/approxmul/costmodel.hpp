#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "approxmul/approx.hpp"
#include "approxmul/arch.hpp"

namespace approxmul {

enum class CostSource {
    proxy,
    external,
};

/// Hardware cost of one configuration. Area in LUT equivalents, delay in
/// logic-level equivalents, power normalized; pda = area * delay * power.
struct CostBreakdown {
    double area = 0.0;
    double delay = 0.0;
    double power = 0.0;
    double pda = 0.0;
    CostSource source = CostSource::proxy;
};

/// Canonical identity of (spec, plan, config): FNV-1a 64 over the canonical
/// serialization, rendered as 16 lowercase hex digits. Stable across runs
/// and platforms.
std::string fingerprint(const SearchPlan& plan, const ApproxConfig& config);

/// Deterministic stand-in for tool-reported PDA. Charges one LUT per
/// surviving HA logic function (Exact and OrSum), none for wires or ground
/// (DirectCout, Eliminate), plus one LUT equivalent per compressed PP bit
/// entering the accumulation; delay is the depth of a balanced tree over
/// the accumulated operand rows; power is normalized to area.
CostBreakdown proxy_cost(const SearchPlan& plan, const ApproxConfig& config);

/// Search objective: pda * log2(mae * mse + 1). Zero for exact multipliers.
double pdae(double pda, double mae, double mse);

/// Eq.-style percentage gain of an approximate design over the exact one:
/// (pda_exact - pda_approx) / pda_exact * 100. Negative when worse.
double pda_improvement(double pda_exact, double pda_approx);

/// Externally measured costs keyed by configuration fingerprint, loaded from
/// a JSON-lines file (see docs/FORMATS.md). Duplicate fingerprints keep the
/// last record; records violating the positivity invariants are rejected.
struct MeasurementTable {
    std::unordered_map<std::string, CostBreakdown> entries;
    std::vector<std::string> warnings;

    bool contains(const std::string& fp) const { return entries.count(fp) != 0; }
};

MeasurementTable load_measurements(const std::filesystem::path& path);

/// Raised in external mode when a configuration has no measured record.
struct UnmeasuredConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// PDA provider used by the search loop. The proxy model is pure; the
/// external model looks fingerprints up in a MeasurementTable and refuses
/// to fall back silently.
class CostModel {
public:
    virtual ~CostModel() = default;
    virtual CostBreakdown cost(const SearchPlan& plan, const ApproxConfig& config) const = 0;
};

class ProxyCostModel final : public CostModel {
public:
    CostBreakdown cost(const SearchPlan& plan, const ApproxConfig& config) const override {
        return proxy_cost(plan, config);
    }
};

class ExternalCostModel final : public CostModel {
public:
    explicit ExternalCostModel(MeasurementTable table) : table_(std::move(table)) {}

    CostBreakdown cost(const SearchPlan& plan, const ApproxConfig& config) const override;

private:
    MeasurementTable table_;
};

}  // namespace approxmul
