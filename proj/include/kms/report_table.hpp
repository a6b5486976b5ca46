#pragma once

// Aligned plain-text tables for `--format table`.

#include <string>
#include <vector>

#include "kms/report_json.hpp"

namespace kms {

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal form; "+inf", "-inf", "nan" otherwise.
[[nodiscard]] std::string format_real(double x);

[[nodiscard]] std::string table(const WeightedGraph& g, const SolveReport& r);
[[nodiscard]] std::string table(const ScanReport& r);
[[nodiscard]] std::string table(const WeightedGraph& g, const GroundReport& r);
[[nodiscard]] std::string table(const CriticalBetaReport& r);
[[nodiscard]] std::string table(const WeightedGraph& g, const VerifyReport& r);
[[nodiscard]] std::string table(const MulReport& r);

}  // namespace kms
