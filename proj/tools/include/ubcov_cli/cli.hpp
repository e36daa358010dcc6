#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubcov::cli {

enum class Command { estimate, precision, eigs, threshold, augmented, simulate };
enum class Format { json, csv, table };

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

struct RunConfig {
    Command command = Command::estimate;
    std::string data_path;
    std::string partition_path;
    std::string scenario_path;
    std::string permutation_path;
    std::optional<std::string> output_path;
    Format format = Format::json;
    std::size_t singletons = 0;
    bool header = false;
    bool correlation = false;
    bool no_center = false;
    double level = 0.95;
    std::optional<double> lambda;
    std::optional<double> lambda_rate;
    bool lambda_auto = false;
    bool exempt_diagonal = false;
    bool clip_psd = false;
    bool hard = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> threads;
};

/// Bad command line. `code` is 0 for --help / --version.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& message, int code = kUsage)
        : std::runtime_error(message), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

/// Strict parsing of the arguments after the program name.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a parsed configuration; reports go to `out` (or the --out
/// file), diagnostics to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-code mapping.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ubcov::cli
