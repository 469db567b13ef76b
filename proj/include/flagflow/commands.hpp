#pragma once

// Command-line surface: decompose, verify-flow, kahler-check, extrinsic-check, morse.

#include "flagflow/lie_core.hpp"
#include "flagflow/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flagflow {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kVerdictFail = 1;
inline constexpr int kValidation = 2;
inline constexpr int kDegeneracy = 3;
inline constexpr int kMaxFailedItems = 125;
}  // namespace exit_code

enum class OutputFormat { Json, Csv };

struct RunConfig {
    Family algebra = Family::SlReal;
    bool algebra_given = false;
    std::size_t n = 3;
    std::optional<std::vector<double>> spectrum;  ///< ascending once validated
    std::vector<std::uint64_t> seeds{0};
    double tol = 1e-10;
    double t_end = 2.0;
    std::size_t samples = 21;
    bool snap = true;
    OutputFormat output = OutputFormat::Json;
    std::optional<std::string> out_path;
};

/// "7" or an inclusive range "1..20". Throws PreconditionError on malformed input.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

/// Comma-separated reals; must sum to zero (trace) within 1e-12 of their absolute sum.
std::vector<double> parse_spectrum(const std::string& text);

RunReport cmd_decompose(const RunConfig& config);
RunReport cmd_verify_flow(const RunConfig& config);
RunReport cmd_kahler_check(const RunConfig& config);
RunReport cmd_extrinsic_check(const RunConfig& config);
RunReport cmd_morse(const RunConfig& config);

/// Exit status for a finished report of the given command.
int report_exit_code(const std::string& command, const RunReport& report);

/// Full CLI: parses `args` (without the program name), runs, writes the report
/// to `out` or --out, diagnostics to `err`, and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flagflow
