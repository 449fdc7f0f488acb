#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "approxmul/codegen.hpp"
#include "verilog_eval.hpp"

using namespace approxmul;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing fixture ", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ApproxConfig random_cfg(int k, std::mt19937_64& rng) {
    ApproxConfig config;
    for (int i = 0; i < k; ++i) {
        config.assignments.push_back(static_cast<HaOption>(rng() & 3));
    }
    return config;
}

}  // namespace

TEST_CASE("all-Exact 4x4 module matches the golden file") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);
    const RtlArtifact artifact =
        emit_approx(plan, ApproxConfig::all(HaOption::Exact, plan.k()), "approx_mul_4x4");
    CHECK(artifact.text == read_file("data/approx_mul_4x4_exact.v.golden"));
}

TEST_CASE("emission is deterministic") {
    const SearchPlan plan = select_search_set(MultSpec(5, 4), 0.7);
    const ApproxConfig config = ApproxConfig::from_codes("ODXE");
    const RtlArtifact a = emit_approx(plan, config, "m1");
    const RtlArtifact b = emit_approx(plan, config, "m1");
    CHECK(a.text == b.text);
    CHECK(emit_exact(MultSpec(6, 6), "e1").text == emit_exact(MultSpec(6, 6), "e1").text);
    CHECK(emit_testbench(MultSpec(6, 6), "m1", "e1").text ==
          emit_testbench(MultSpec(6, 6), "m1", "e1").text);
}

TEST_CASE("header fingerprint matches the cost-model fingerprint") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 0.8);
    const ApproxConfig config = ApproxConfig::from_codes("DOXEE");
    const RtlArtifact artifact = emit_approx(plan, config, "fp_check");
    const std::string fp = fingerprint(plan, config);
    CHECK(artifact.fingerprint == fp);
    CHECK(artifact.text.find("// fingerprint: " + fp + "\n") != std::string::npos);
}

TEST_CASE("all-Eliminate keeps exactly the uncompressed pp terms in the sum") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);
    const RtlArtifact artifact =
        emit_approx(plan, ApproxConfig::all(HaOption::Eliminate, plan.k()), "all_elim");

    // count pp_ references inside the accumulation operand lines
    std::istringstream lines(artifact.text);
    std::string line;
    int pp_terms = 0;
    while (std::getline(lines, line)) {
        if (line.find("acc_") == std::string::npos || line.find("wire") == std::string::npos) {
            continue;
        }
        for (size_t pos = line.find("pp_"); pos != std::string::npos;
             pos = line.find("pp_", pos + 1)) {
            ++pp_terms;
        }
    }
    CHECK(pp_terms == uncompressed_count(MultSpec(4, 4)));
}

TEST_CASE("emitted modules compute the same value as the evaluator") {
    std::mt19937_64 rng(0xC0DE);
    for (const auto& [n, m] : {std::pair{4, 4}, {5, 3}, {3, 4}, {8, 8}, {2, 2}}) {
        const SearchPlan plan = select_search_set(MultSpec(n, m), 0.9);
        for (int trial = 0; trial < 12; ++trial) {
            const ApproxConfig config = random_cfg(plan.k(), rng);
            const RtlArtifact artifact = emit_approx(plan, config, "dut");
            for (int probe = 0; probe < 24; ++probe) {
                const uint64_t x = rng() & ((uint64_t{1} << m) - 1);
                const uint64_t y = rng() & ((uint64_t{1} << n) - 1);
                REQUIRE(vmini::eval_module(artifact.text, x, y) ==
                        evaluate(plan, config, x, y));
            }
        }
    }
}

TEST_CASE("exact reference module") {
    const RtlArtifact artifact = emit_exact(MultSpec(8, 8), "exact_mul_8x8");
    CHECK(artifact.module_name == "exact_mul_8x8");
    CHECK(artifact.text.find("module exact_mul_8x8 (") != std::string::npos);
    CHECK(artifact.text.find("input  wire [7:0] x,") != std::string::npos);
    CHECK(artifact.text.find("input  wire [7:0] y,") != std::string::npos);
    CHECK(artifact.text.find("output wire [15:0] p") != std::string::npos);
    CHECK(artifact.text.find("assign p = x * y;") != std::string::npos);
}

TEST_CASE("identifier validation") {
    const SearchPlan plan = select_search_set(MultSpec(4, 4), 1.0);
    const ApproxConfig config = ApproxConfig::all(HaOption::Exact, plan.k());
    CHECK_THROWS_AS(emit_approx(plan, config, "1bad"), std::invalid_argument);
    CHECK_THROWS_AS(emit_approx(plan, config, "has space"), std::invalid_argument);
    CHECK_THROWS_AS(emit_approx(plan, config, "module"), std::invalid_argument);
    CHECK_THROWS_AS(emit_exact(MultSpec(4, 4), ""), std::invalid_argument);
    CHECK_THROWS_AS(emit_testbench(MultSpec(4, 4), "ok", "wire"), std::invalid_argument);
}

TEST_CASE("testbench sweeps the whole input space at small widths") {
    const RtlArtifact bench = emit_testbench(MultSpec(4, 4), "app", "ext");
    CHECK(bench.module_name == "app_tb");
    CHECK(bench.text.find("yi < 16") != std::string::npos);
    CHECK(bench.text.find("xi < 16") != std::string::npos);
    CHECK(bench.text.find("samples=%0d\", sum_abs, sum_sq, max_abs, 256)") !=
          std::string::npos);
}

TEST_CASE("wide testbench drives the seeded permutation") {
    const RtlArtifact bench = emit_testbench(MultSpec(12, 12), "app", "ext", 4096, 7);
    CHECK(bench.text.find("feistel_pass") != std::string::npos);
    CHECK(bench.text.find("mix64") != std::string::npos);
    CHECK(bench.text.find("i < 4096") != std::string::npos);
}

TEST_CASE("testbench output parsing round trips") {
    const TbErrorSums sums = parse_testbench_output(
        "blah\nERRSUM abs=8960 sq=565120 max=140 samples=256\ndone\n");
    CHECK(sums.sum_abs == 8960);
    CHECK(sums.sum_sq == 565120);
    CHECK(sums.max_abs == 140);
    CHECK(sums.samples == 256);

    const TbErrorSums zero = parse_testbench_output("ERRSUM abs=0 sq=0 max=0 samples=256\n");
    CHECK(zero.sum_abs == 0);
    CHECK(zero.sum_sq == 0);

    CHECK_THROWS_AS(parse_testbench_output("no marker here"), std::runtime_error);
}
