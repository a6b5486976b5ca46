#pragma once

// JSON form of every report the CLI prints. Each type round-trips through
// to_json/from_json field for field. Non-finite reals are written as the
// strings "+inf", "-inf" and "nan" since JSON has no literal for them.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kms/functional.hpp"
#include "kms/solver.hpp"
#include "kms/verify.hpp"

namespace kms {

using nlohmann::json;

[[nodiscard]] json real_to_json(double x);
[[nodiscard]] double real_from_json(const json& j);

struct CriticalBetaReport {
  std::optional<double> beta;
  double tol = 1e-9;
  bool operator==(const CriticalBetaReport&) const = default;
};

struct VerifyReport {
  double beta = 1.0;
  Trace tau;
  CoverageReport coverage;
  PositivityReport positivity;
  std::vector<K1Violation> k1_violations;
};

struct MulReport {
  std::string lhs;
  std::string rhs;
  std::string product;
  bool operator==(const MulReport&) const = default;
};

bool operator==(const ScanPoint& a, const ScanPoint& b);
bool operator==(const ScanReport& a, const ScanReport& b);
bool operator==(const SolveReport& a, const SolveReport& b);
bool operator==(const GroundReport& a, const GroundReport& b);
bool operator==(const CoverageReport& a, const CoverageReport& b);
bool operator==(const PositivityReport& a, const PositivityReport& b);
bool operator==(const K1Violation& a, const K1Violation& b);
bool operator==(const VerifyReport& a, const VerifyReport& b);
bool operator==(const StarTruncationPoint& a, const StarTruncationPoint& b);

void to_json(json& j, const VertexId& v);
void from_json(const json& j, VertexId& v);
void to_json(json& j, const Trace& t);
void from_json(const json& j, Trace& t);
void to_json(json& j, const SolveReport& r);
void from_json(const json& j, SolveReport& r);
void to_json(json& j, const ScanPoint& p);
void from_json(const json& j, ScanPoint& p);
void to_json(json& j, const ScanReport& r);
void from_json(const json& j, ScanReport& r);
void to_json(json& j, const GroundReport& r);
void from_json(const json& j, GroundReport& r);
void to_json(json& j, const CriticalBetaReport& r);
void from_json(const json& j, CriticalBetaReport& r);
void to_json(json& j, const CoverageReport& r);
void from_json(const json& j, CoverageReport& r);
void to_json(json& j, const PositivityReport& r);
void from_json(const json& j, PositivityReport& r);
void to_json(json& j, const K1Violation& v);
void from_json(const json& j, K1Violation& v);
void to_json(json& j, const VerifyReport& r);
void from_json(const json& j, VerifyReport& r);
void to_json(json& j, const MulReport& r);
void from_json(const json& j, MulReport& r);
void to_json(json& j, const StarTruncationPoint& p);
void from_json(const json& j, StarTruncationPoint& p);

}  // namespace kms
