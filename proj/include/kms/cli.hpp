#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kms/graph.hpp"

namespace kms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:step" -> a, a + step, ... <= b. Throws InputError unless 0 < a <= b and step > 0.
[[nodiscard]] std::vector<double> parse_grid(const std::string& spec);

/// One-vertex graph whose loops are the edge ids mentioned in the monomial
/// expressions; the vertex takes the name used in p[..], default "v".
[[nodiscard]] WeightedGraph graph_for_expressions(const std::vector<std::string>& expressions);

}  // namespace kms::cli
