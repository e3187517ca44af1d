#pragma once

#include "nlsubdiv/sequence.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsd::cli {

inline constexpr std::uint64_t default_seed = 20240521;

/// Bad command line or config file (exit status 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unset optionals take a per-command default.
struct RunConfig {
    std::string command;
    std::optional<std::string> scheme;  // shorthand ("uncentered:9") or JSON descriptor text
    std::string input;
    std::string output;
    std::string format;  // csv | json | binary; empty = from the output extension
    std::optional<int> levels;
    std::optional<int> trials;
    std::uint64_t seed = default_seed;
    double tolerance = 1e-3;
    int fit_min = 4;
    int fit_max = -1;
    std::optional<Boundary> boundary;
    std::string delta;  // empty = the scheme's natural delta (contraction) or best order (spectral)
    std::string mode = "empirical";  // contraction: empirical | lipschitz | perturbation
    int steps = 1;
    int window = 64;
    unsigned threads = 0;
    std::vector<int> points;
};

/// Flags win over --config, which wins over SUBDIV_SEED (seed only), which wins
/// over defaults. Throws UsageError; sets `help` instead when --help is given.
RunConfig parse_command_line(int argc, const char* const* argv, const char* seed_env, std::string* help = nullptr);

/// Throws UsageError before any compute when paths or parameters are invalid.
void validate(const RunConfig& config);

/// Executes one command, writing artifacts and the human-readable summary to `out`.
/// Library failures propagate as nlsd::Error.
void run(const RunConfig& config, std::ostream& out);

/// Full front end: exit 0 on success, 2 on usage errors, 1 on compute errors,
/// with a one-line JSON error record on `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlsd::cli
