/// @file cli.hpp
/// @brief Command-line front end: eval, rank, refine, correlate, report, simulate.

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace treejudge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Parses and runs one command. Normal output goes to `out`, diagnostics and
/// help for usage errors to `err`.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads a two-column `label,value` CSV. A first row whose value is not
/// numeric is taken as a header. Throws IoFailure or ParseError.
std::vector<std::pair<std::string, double>> read_ranking_csv(const std::string& path);

struct Correlation {
    double rho = 0.0;
    double tau = 0.0;
    std::size_t n = 0;  // labels present in both rankings
};

/// Joins two rankings on label (first ranking's order) and correlates them.
Correlation correlate_rankings(const std::vector<std::pair<std::string, double>>& a,
                               const std::vector<std::pair<std::string, double>>& b);

}  // namespace treejudge
