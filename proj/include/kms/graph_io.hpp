#pragma once

#include <filesystem>
#include <string_view>

#include "kms/graph.hpp"

namespace kms {

/// Parses the JSON graph format:
///
///   { "vertices": ["v", ...],
///     "edges":   [{"id": "e", "src": "v", "dst": "w", "weight": 2.0}, ...],
///     "bundles": [{"id": "b", "src": "v", "dst": "v",
///                  "family": "geometric", "params": {"a": 2, "r": 2}}, ...] }
///
/// Bundle families: "geometric" {a, r}; "constant" {value} (divergent for
/// every beta); "explicit_tail" {head: [..], tail: {"family": "geometric"|
/// "constant"|"none", ...}}. Errors carry line/column positions.
[[nodiscard]] WeightedGraph parse_graph(std::string_view json_text, GraphOptions options = {});
[[nodiscard]] WeightedGraph load_graph(const std::filesystem::path& file, GraphOptions options = {});

/// Closed-form tail families shared by the loader and the solver templates.
[[nodiscard]] ExplicitTailFamily constant_family(double value);
[[nodiscard]] ExplicitTailFamily explicit_geometric_tail(std::vector<double> head, double a, double r);

}  // namespace kms
