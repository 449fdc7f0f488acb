#include "approxmul/codegen.hpp"

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace approxmul {

namespace {

const std::set<std::string>& verilog_keywords() {
    static const std::set<std::string> keywords = {
        "always",   "assign",   "begin",    "case",     "default",  "else",     "end",
        "endcase",  "endfunction", "endmodule", "endtask", "for",   "function", "if",
        "initial",  "input",    "integer",  "module",   "negedge",  "output",   "parameter",
        "posedge",  "reg",      "signed",   "task",     "while",    "wire",
    };
    return keywords;
}

void check_identifier(const std::string& name) {
    if (name.empty() || (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')) {
        throw std::invalid_argument("invalid Verilog identifier: '" + name + "'");
    }
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
            throw std::invalid_argument("invalid Verilog identifier: '" + name + "'");
        }
    }
    if (verilog_keywords().count(name) != 0) {
        throw std::invalid_argument("Verilog keyword cannot be a module name: '" + name + "'");
    }
}

std::string pp_name(int row, int col) {
    return "pp_" + std::to_string(row) + "_" + std::to_string(col);
}

std::string ha_name(const HaSlot& slot, const char* port) {
    return "ha_p" + std::to_string(slot.pair) + "_c" + std::to_string(slot.col) + "_" + port;
}

std::string zeros(int count) {
    return "{" + std::to_string(count) + "{1'b0}}";
}

std::string fmt(const char* format, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), format, value);
    return buffer;
}

std::string hex64(uint64_t value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "64'h%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

}  // namespace

RtlArtifact emit_approx(const SearchPlan& plan, const ApproxConfig& config,
                        const std::string& module_name, const ErrorReport* report,
                        const CostBreakdown* cost) {
    check_identifier(module_name);
    check_config(plan, config);
    const int n = plan.spec.n;
    const int m = plan.spec.m;
    const std::string fp = fingerprint(plan, config);

    std::ostringstream v;
    v << "// " << module_name << ": approximate " << n << "x" << m << " unsigned multiplier\n";
    v << "// fingerprint: " << fp << "\n";
    v << "// spec: n=" << n << " m=" << m << " r=" << fmt("%.6g", plan.r) << " k=" << plan.k()
      << "\n";
    v << "// options: " << (plan.k() > 0 ? config.codes() : std::string("(none)"))
      << "  (searched HA slots by ascending weight; reserved slots exact)\n";
    if (report != nullptr) {
        v << "// error: mae=" << fmt("%.9g", report->mae) << " mse=" << fmt("%.9g", report->mse)
          << " mm_prime=" << fmt("%.9g", report->mm_prime) << "\n";
    }
    if (cost != nullptr) {
        v << "// cost: area=" << fmt("%.9g", cost->area) << " delay=" << fmt("%.9g", cost->delay)
          << " power=" << fmt("%.9g", cost->power) << " pda=" << fmt("%.9g", cost->pda) << "\n";
    }
    v << "module " << module_name << " (\n";
    v << "    input  wire [" << m - 1 << ":0] x,\n";
    v << "    input  wire [" << n - 1 << ":0] y,\n";
    v << "    output wire [" << n + m - 1 << ":0] p\n";
    v << ");\n\n";

    v << "    // partial products\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            v << "    wire " << pp_name(i, j) << " = x[" << j << "] & y[" << i << "];\n";
        }
    }

    v << "\n    // half adders (pair p compresses rows 2p and 2p+1)\n";
    auto emit_slot = [&](const HaSlot& slot, HaOption opt) {
        const std::string a = pp_name(slot.input_a().row, slot.input_a().col);
        const std::string b = pp_name(slot.input_b().row, slot.input_b().col);
        switch (opt) {
            case HaOption::Exact:
                v << "    wire " << ha_name(slot, "sum") << " = " << a << " ^ " << b << ";\n";
                v << "    wire " << ha_name(slot, "cout") << " = " << a << " & " << b << ";\n";
                break;
            case HaOption::OrSum:
                v << "    wire " << ha_name(slot, "sum") << " = " << a << " | " << b << ";\n";
                v << "    wire " << ha_name(slot, "cout") << " = 1'b0;\n";
                break;
            case HaOption::DirectCout:
                v << "    wire " << ha_name(slot, "sum") << " = 1'b0;\n";
                v << "    wire " << ha_name(slot, "cout") << " = " << a << ";\n";
                break;
            case HaOption::Eliminate:
                v << "    wire " << ha_name(slot, "sum") << " = 1'b0;\n";
                v << "    wire " << ha_name(slot, "cout") << " = 1'b0;\n";
                break;
        }
    };
    for (size_t i = 0; i < plan.searched.size(); ++i) {
        emit_slot(plan.searched[i], config.assignments[i]);
    }
    for (const HaSlot& slot : plan.reserved_exact) {
        emit_slot(slot, HaOption::Exact);
    }

    // One operand vector per compressed row: the pair's sum row spans
    // weights 2p..2p+m (uncompressed (2p,0) at the bottom, (2p+1,m-1) on
    // top), the cout row spans 2p+2..2p+m. An odd final row passes through.
    v << "\n    // row operands for the carry-chain accumulation\n";
    const int width = n + m;
    std::vector<std::string> operands;
    for (int p = 0; p < n / 2; ++p) {
        std::string sum_vec = "{" + zeros(n - 2 * p - 1) + ", " + pp_name(2 * p + 1, m - 1);
        for (int j = m - 1; j >= 1; --j) {
            sum_vec += ", " + ha_name(HaSlot{p, j}, "sum");
        }
        sum_vec += ", " + pp_name(2 * p, 0);
        if (p > 0) {
            sum_vec += ", " + zeros(2 * p);
        }
        sum_vec += "}";

        std::string cout_vec = "{" + zeros(n - 2 * p - 1);
        for (int j = m - 1; j >= 1; --j) {
            cout_vec += ", " + ha_name(HaSlot{p, j}, "cout");
        }
        cout_vec += ", " + zeros(2 * p + 2) + "}";

        const std::string sum_name = "acc_p" + std::to_string(p) + "_sum";
        const std::string cout_name = "acc_p" + std::to_string(p) + "_cout";
        v << "    wire [" << width - 1 << ":0] " << sum_name << " = " << sum_vec << ";\n";
        v << "    wire [" << width - 1 << ":0] " << cout_name << " = " << cout_vec << ";\n";
        operands.push_back(sum_name);
        operands.push_back(cout_name);
    }
    if (n % 2 == 1) {
        std::string row_vec = "{" + zeros(1);
        for (int j = m - 1; j >= 0; --j) {
            row_vec += ", " + pp_name(n - 1, j);
        }
        row_vec += ", " + zeros(n - 1) + "}";
        v << "    wire [" << width - 1 << ":0] acc_odd_row = " << row_vec << ";\n";
        operands.push_back("acc_odd_row");
    }

    v << "\n    assign p = ";
    for (size_t i = 0; i < operands.size(); ++i) {
        if (i > 0) {
            v << " + ";
        }
        v << operands[i];
    }
    v << ";\n\nendmodule\n";

    RtlArtifact artifact;
    artifact.module_name = module_name;
    artifact.text = v.str();
    artifact.spec = plan.spec;
    artifact.fingerprint = fp;
    return artifact;
}

RtlArtifact emit_exact(const MultSpec& spec, const std::string& module_name) {
    check_identifier(module_name);
    std::ostringstream v;
    v << "// " << module_name << ": exact " << spec.n << "x" << spec.m
      << " unsigned multiplier reference\n";
    v << "module " << module_name << " (\n";
    v << "    input  wire [" << spec.m - 1 << ":0] x,\n";
    v << "    input  wire [" << spec.n - 1 << ":0] y,\n";
    v << "    output wire [" << spec.n + spec.m - 1 << ":0] p\n";
    v << ");\n\n";
    v << "    assign p = x * y;\n";
    v << "\nendmodule\n";

    RtlArtifact artifact;
    artifact.module_name = module_name;
    artifact.text = v.str();
    artifact.spec = spec;
    return artifact;
}

RtlArtifact emit_testbench(const MultSpec& spec, const std::string& approx_name,
                           const std::string& exact_name, uint64_t n_samples, uint64_t seed) {
    check_identifier(approx_name);
    check_identifier(exact_name);
    const int n = spec.n;
    const int m = spec.m;
    const int bits = n + m;
    const bool exhaustive = bits <= 20;
    const std::string module_name = approx_name + "_tb";
    check_identifier(module_name);

    std::ostringstream v;
    v << "`timescale 1ns/1ps\n";
    v << "// " << module_name << ": compares " << approx_name << " against " << exact_name
      << "\n";
    if (exhaustive) {
        v << "// sweeps all " << (uint64_t{1} << bits) << " input pairs\n";
    } else {
        v << "// drives " << n_samples << " vectors from the analyzer's seeded permutation"
          << " (seed " << seed << ")\n";
    }
    v << "module " << module_name << ";\n\n";
    v << "    reg [" << m - 1 << ":0] x;\n";
    v << "    reg [" << n - 1 << ":0] y;\n";
    v << "    wire [" << bits - 1 << ":0] p_app;\n";
    v << "    wire [" << bits - 1 << ":0] p_ext;\n\n";
    v << "    " << approx_name << " dut_app (.x(x), .y(y), .p(p_app));\n";
    v << "    " << exact_name << " dut_ext (.x(x), .y(y), .p(p_ext));\n\n";
    v << "    reg signed [63:0] d;\n";
    v << "    reg [63:0] sum_abs;\n";
    v << "    reg [63:0] sum_sq;\n";
    v << "    reg [63:0] max_abs;\n";

    if (!exhaustive) {
        const int even_bits = bits + (bits & 1);
        const int half = even_bits / 2;
        const uint64_t half_mask = (uint64_t{1} << half) - 1;
        const uint64_t domain = uint64_t{1} << bits;
        v << "\n    function [63:0] mix64;\n";
        v << "        input [63:0] z0;\n";
        v << "        reg [63:0] z;\n";
        v << "        begin\n";
        v << "            z = z0 + 64'h9e3779b97f4a7c15;\n";
        v << "            z = (z ^ (z >> 30)) * 64'hbf58476d1ce4e5b9;\n";
        v << "            z = (z ^ (z >> 27)) * 64'h94d049bb133111eb;\n";
        v << "            mix64 = z ^ (z >> 31);\n";
        v << "        end\n";
        v << "    endfunction\n\n";
        v << "    function [63:0] feistel_pass;\n";
        v << "        input [63:0] v;\n";
        v << "        input [63:0] pass_seed;\n";
        v << "        reg [63:0] left;\n";
        v << "        reg [63:0] right;\n";
        v << "        reg [63:0] f;\n";
        v << "        reg [63:0] nr;\n";
        v << "        integer round;\n";
        v << "        begin\n";
        v << "            left = v >> " << half << ";\n";
        v << "            right = v & " << hex64(half_mask) << ";\n";
        v << "            for (round = 0; round < 4; round = round + 1) begin\n";
        v << "                f = mix64(right ^ pass_seed ^ (64'ha0761d6478bd642f * (round + 1)))"
          << " & " << hex64(half_mask) << ";\n";
        v << "                nr = left ^ f;\n";
        v << "                left = right;\n";
        v << "                right = nr;\n";
        v << "            end\n";
        v << "            feistel_pass = (left << " << half << ") | right;\n";
        v << "        end\n";
        v << "    endfunction\n\n";
        v << "    function [63:0] permute_index;\n";
        v << "        input [63:0] v0;\n";
        v << "        input [63:0] pass_seed;\n";
        v << "        reg [63:0] v;\n";
        v << "        begin\n";
        v << "            v = feistel_pass(v0, pass_seed);\n";
        v << "            while (v >= " << hex64(domain) << ") v = feistel_pass(v, pass_seed);\n";
        v << "            permute_index = v;\n";
        v << "        end\n";
        v << "    endfunction\n";
    }

    v << "\n    task accumulate;\n";
    v << "        begin\n";
    v << "            d = $signed({1'b0, p_app}) - $signed({1'b0, p_ext});\n";
    v << "            if (d < 0) d = -d;\n";
    v << "            sum_abs = sum_abs + d;\n";
    v << "            sum_sq = sum_sq + d * d;\n";
    v << "            if (d > max_abs) max_abs = d;\n";
    v << "        end\n";
    v << "    endtask\n\n";

    if (exhaustive) {
        v << "    integer xi;\n";
        v << "    integer yi;\n\n";
        v << "    initial begin\n";
        v << "        sum_abs = 0;\n";
        v << "        sum_sq = 0;\n";
        v << "        max_abs = 0;\n";
        v << "        for (yi = 0; yi < " << (1 << n) << "; yi = yi + 1) begin\n";
        v << "            for (xi = 0; xi < " << (1 << m) << "; xi = xi + 1) begin\n";
        v << "                x = xi;\n";
        v << "                y = yi;\n";
        v << "                #1;\n";
        v << "                accumulate;\n";
        v << "            end\n";
        v << "        end\n";
        v << "        $display(\"ERRSUM abs=%0d sq=%0d max=%0d samples=%0d\", sum_abs, sum_sq,"
          << " max_abs, " << (uint64_t{1} << bits) << ");\n";
        v << "        $finish;\n";
        v << "    end\n";
    } else {
        const uint64_t domain = uint64_t{1} << bits;
        v << "    reg [63:0] pass_seed;\n";
        v << "    reg [63:0] within;\n";
        v << "    reg [63:0] idx;\n";
        v << "    reg [63:0] i;\n\n";
        v << "    initial begin\n";
        v << "        sum_abs = 0;\n";
        v << "        sum_sq = 0;\n";
        v << "        max_abs = 0;\n";
        v << "        pass_seed = mix64(" << hex64(seed) << ");\n";
        v << "        within = 0;\n";
        v << "        for (i = 0; i < " << n_samples << "; i = i + 1) begin\n";
        v << "            idx = permute_index(within, pass_seed);\n";
        v << "            x = idx[" << m - 1 << ":0];\n";
        v << "            y = idx >> " << m << ";\n";
        v << "            #1;\n";
        v << "            accumulate;\n";
        v << "            within = within + 1;\n";
        v << "            if (within == " << hex64(domain) << ") begin\n";
        v << "                within = 0;\n";
        v << "                pass_seed = mix64(pass_seed);\n";
        v << "            end\n";
        v << "        end\n";
        v << "        $display(\"ERRSUM abs=%0d sq=%0d max=%0d samples=%0d\", sum_abs, sum_sq,"
          << " max_abs, " << n_samples << ");\n";
        v << "        $finish;\n";
        v << "    end\n";
    }
    v << "\nendmodule\n";

    RtlArtifact artifact;
    artifact.module_name = module_name;
    artifact.text = v.str();
    artifact.spec = spec;
    return artifact;
}

TbErrorSums parse_testbench_output(const std::string& output) {
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        TbErrorSums sums;
        unsigned long long abs_v = 0;
        unsigned long long sq_v = 0;
        unsigned long long max_v = 0;
        unsigned long long samples_v = 0;
        if (std::sscanf(line.c_str(), "ERRSUM abs=%llu sq=%llu max=%llu samples=%llu", &abs_v,
                        &sq_v, &max_v, &samples_v) == 4) {
            sums.sum_abs = abs_v;
            sums.sum_sq = sq_v;
            sums.max_abs = max_v;
            sums.samples = samples_v;
            return sums;
        }
    }
    throw std::runtime_error("no ERRSUM line found in testbench output");
}

}  // namespace approxmul
