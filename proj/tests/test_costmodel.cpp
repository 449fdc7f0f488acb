#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "approxmul/costmodel.hpp"

using namespace approxmul;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("proxy cost anchors at 4x4") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);

    const CostBreakdown exact = proxy_cost(plan, ApproxConfig::all(HaOption::Exact, 6));
    CHECK(exact.area == 22.0);   // 6 slot LUTs + 16 compressed bits
    CHECK(exact.delay == 3.0);   // 1 + ceil(log2(4 rows))
    CHECK(exact.power == exact.area);
    CHECK(exact.pda == 22.0 * 3.0 * 22.0);
    CHECK(exact.source == CostSource::proxy);

    const CostBreakdown elim = proxy_cost(plan, ApproxConfig::all(HaOption::Eliminate, 6));
    CHECK(elim.area == 4.0);
}

TEST_CASE("downgrading Exact to Eliminate never raises area") {
    const SearchPlan plan = select_search_set(MultSpec(6, 5), 1.0);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        ApproxConfig config;
        for (int i = 0; i < plan.k(); ++i) {
            config.assignments.push_back(static_cast<HaOption>(rng() & 3));
        }
        const double base = proxy_cost(plan, config).area;
        for (int i = 0; i < plan.k(); ++i) {
            if (config.assignments[i] != HaOption::Exact) {
                continue;
            }
            ApproxConfig cut = config;
            cut.assignments[i] = HaOption::Eliminate;
            CHECK(proxy_cost(plan, cut).area <= base);
        }
    }
}

TEST_CASE("pdae anchors and monotonicity") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const double pda = 1.0 + static_cast<double>(rng() % 100000) / 7.0;
        CHECK(pdae(pda, 0.0, 0.0) == 0.0);
    }
    CHECK(pdae(100.0, 1.0, 3.0) == doctest::Approx(200.0));
    CHECK(pdae(50.0, 1023.0, 1.0) == doctest::Approx(500.0));

    CHECK(pdae(101.0, 2.0, 3.0) > pdae(100.0, 2.0, 3.0));
    CHECK(pdae(100.0, 2.0, 3.5) > pdae(100.0, 2.0, 3.0));
    CHECK_THROWS_AS(pdae(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("pda improvement percentages") {
    CHECK(pda_improvement(100.0, 75.0) == 25.0);
    CHECK(pda_improvement(100.0, 100.0) == 0.0);
    CHECK(pda_improvement(100.0, 125.0) == -25.0);
    CHECK_THROWS_AS(pda_improvement(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("fingerprints are canonical and stable") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);
    // Frozen literals: regressions here mean the published hash changed.
    CHECK(fingerprint(plan, ApproxConfig::all(HaOption::Exact, 6)) == "a6c5992e3cbb3dcc");
    CHECK(fingerprint(plan, ApproxConfig::from_codes("EODXEO")) == "6b004003263a23f0");

    CHECK(fingerprint(plan, ApproxConfig::from_codes("EODXEO")) ==
          fingerprint(plan, ApproxConfig::from_codes("EODXEO")));
    CHECK(fingerprint(plan, ApproxConfig::from_codes("EODXEO")) !=
          fingerprint(plan, ApproxConfig::from_codes("EODXEE")));

    const SearchPlan other = select_search_set(MultSpec(4, 5), 1.0);
    CHECK(fingerprint(other, ApproxConfig::all(HaOption::Exact, other.k())) !=
          fingerprint(plan, ApproxConfig::all(HaOption::Exact, 6)));
}

TEST_CASE("measurement table loading") {
    SUBCASE("empty file yields an empty table") {
        const auto path = write_temp("measure_empty.jsonl", "");
        const MeasurementTable table = load_measurements(path);
        CHECK(table.entries.empty());
        CHECK(table.warnings.empty());
    }
    SUBCASE("duplicate fingerprints keep the last record and warn") {
        const auto path = write_temp(
            "measure_dup.jsonl",
            R"({"fingerprint":"abc","area":2.0,"delay":3.0,"power":1.5})"
            "\n"
            R"({"fingerprint":"abc","area":4.0,"delay":1.0,"power":1.0})"
            "\n");
        const MeasurementTable table = load_measurements(path);
        REQUIRE(table.entries.count("abc") == 1);
        CHECK(table.entries.at("abc").area == 4.0);
        CHECK(table.entries.at("abc").pda == 4.0);
        REQUIRE(table.warnings.size() == 1);
        CHECK(table.warnings[0].find("duplicate") != std::string::npos);
    }
    SUBCASE("non-positive fields reject the record with a diagnostic") {
        const auto path = write_temp(
            "measure_bad.jsonl",
            R"({"fingerprint":"neg","area":-1.0,"delay":3.0,"power":1.0})"
            "\n"
            R"({"fingerprint":"ok","area":1.0,"delay":1.0,"power":1.0})"
            "\n");
        const MeasurementTable table = load_measurements(path);
        CHECK(table.entries.count("neg") == 0);
        CHECK(table.entries.count("ok") == 1);
        REQUIRE(table.warnings.size() == 1);
        CHECK(table.warnings[0].find(":1:") != std::string::npos);
    }
    SUBCASE("malformed lines fail with the line number") {
        const auto path = write_temp("measure_malformed.jsonl",
                                     R"({"fingerprint":"abc","area":2.0,"delay":3.0,"power":1})"
                                     "\nnot json\n");
        CHECK_THROWS_WITH_AS(load_measurements(path), doctest::Contains(":2:"),
                             std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_measurements("/nonexistent/measurements.jsonl"),
                        std::runtime_error);
    }
}

TEST_CASE("external cost model never falls back silently") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);
    const ApproxConfig config = ApproxConfig::from_codes("EODXEO");
    const std::string fp = fingerprint(plan, config);

    MeasurementTable table;
    table.entries[fp] = {10.0, 2.0, 5.0, 100.0, CostSource::external};
    const ExternalCostModel model(table);

    const CostBreakdown hit = model.cost(plan, config);
    CHECK(hit.pda == 100.0);
    CHECK(hit.source == CostSource::external);

    CHECK_THROWS_AS(model.cost(plan, ApproxConfig::from_codes("EEEEEE")), UnmeasuredConfig);
}
