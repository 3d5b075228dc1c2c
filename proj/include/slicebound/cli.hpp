#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slicebound/report.hpp"
#include "slicebound/tolerances.hpp"

namespace slicebound {

enum class Command { validate, project, bound, verify, construct, sweep };
enum class OutputFormat { json, csv };

struct RunConfig {
    Command command = Command::validate;
    std::string input_path;
    /// Inline JSON (starting with '[', '{' or '"') or a file path.
    std::string subspace_spec;
    std::vector<std::string> bounds;  // empty means all
    OracleMode oracle = OracleMode::both;
    std::int64_t samples = 1000000;
    std::optional<std::uint64_t> seed;
    Tolerances tol;
    bool force = false;
    std::optional<double> lambda;
    std::string output_path;  // empty means stdout
    OutputFormat format = OutputFormat::json;

    // construct
    std::string body;
    int k = 0;
    int n = 0;

    // verify
    bool parseval = false;
    double quad_tol = 1e-8;

    // sweep
    std::string generator = "subspaces";
    int count = 0;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int structural = 1;
inline constexpr int gate = 2;
}  // namespace exit_code

/// Runs one command. Reports go to config.output_path or `out`; diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments and runs. Falls back to SLICEBOUND_SEED when --seed is absent.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Fixed CSV header of sweep output.
std::vector<std::string> sweep_columns();

}  // namespace slicebound
