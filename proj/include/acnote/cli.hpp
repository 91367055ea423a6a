#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace acnote::cli {

enum ExitCode : int { kSuccess = 0, kDomainError = 1, kIoError = 2 };

enum class InterpretationChoice { A, B, both };

/// Everything a subcommand needs. Fields a subcommand does not use are ignored.
struct RunConfig {
    std::string subcommand;

    std::string terms_path;
    std::string prices_path;
    std::string model_path;
    /// Output file for sweep; empty or "-" writes to standard output.
    std::string out_path;

    InterpretationChoice interpretation = InterpretationChoice::both;

    // price / sweep
    std::string mode = "iid";
    double p = 0.0;
    std::optional<double> b1;
    std::optional<double> b2;
    std::optional<double> tau;
    bool extrema = false;
    std::size_t resolution = 10'000;
    std::size_t points = 101;
    std::size_t tau_points = 101;

    // simulate
    std::optional<std::uint64_t> seed;
    std::size_t n_paths = 100'000;
    std::size_t block_size = 4096;
    unsigned workers = 0;
};

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_replay(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_price(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `argv` and dispatches to the matching cmd_* function.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace acnote::cli
