#include "kms/report_json.hpp"

#include <cmath>
#include <limits>

#include "kms/error.hpp"

namespace kms {

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  return x;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a real number, got " + j.dump());
}

namespace {

// NaN never equals itself; reports compare it as equal so round-trips hold.
bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

template <class T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json reals(std::span<const double> xs) {
  json out = json::array();
  for (double x : xs) out.push_back(real_to_json(x));
  return out;
}

}  // namespace

bool operator==(const ScanPoint& a, const ScanPoint& b) {
  return same(a.beta, b.beta) && a.feasible == b.feasible && a.dimension == b.dimension &&
         a.extreme_count == b.extreme_count;
}
bool operator==(const ScanReport& a, const ScanReport& b) {
  return a.points == b.points && a.monotone == b.monotone && a.threshold == b.threshold;
}
bool operator==(const SolveReport& a, const SolveReport& b) {
  return same(a.beta, b.beta) && a.feasible == b.feasible && a.witness == b.witness &&
         a.extreme_points == b.extreme_points && a.dimension == b.dimension &&
         a.enumeration_error == b.enumeration_error;
}
bool operator==(const GroundReport& a, const GroundReport& b) {
  return a.singular_vertices == b.singular_vertices && a.dimension == b.dimension;
}
bool operator==(const CoverageReport& a, const CoverageReport& b) {
  for (std::size_t i = 0; i < 9; ++i)
    if (!same(a.max_residual[i], b.max_residual[i])) return false;
  return a.counts == b.counts && a.trials == b.trials && a.seed == b.seed &&
         a.k1_warning == b.k1_warning;
}
bool operator==(const PositivityReport& a, const PositivityReport& b) {
  return same(a.min_value, b.min_value) && same(a.max_imag, b.max_imag) && a.trials == b.trials &&
         a.seed == b.seed;
}
bool operator==(const K1Violation& a, const K1Violation& b) {
  return a.vertex == b.vertex && same(a.residual, b.residual);
}
bool operator==(const VerifyReport& a, const VerifyReport& b) {
  return same(a.beta, b.beta) && a.tau == b.tau && a.coverage == b.coverage &&
         a.positivity == b.positivity && a.k1_violations == b.k1_violations;
}
bool operator==(const StarTruncationPoint& a, const StarTruncationPoint& b) {
  return a.n == b.n && a.threshold == b.threshold && a.feasible_for_all_beta == b.feasible_for_all_beta;
}

void to_json(json& j, const VertexId& v) { j = v.value; }
void from_json(const json& j, VertexId& v) { v.value = j.get<std::uint32_t>(); }

void to_json(json& j, const Trace& t) { j = reals(t.values()); }
void from_json(const json& j, Trace& t) {
  std::vector<double> values;
  for (const auto& x : j) values.push_back(real_from_json(x));
  t = Trace(std::move(values));
}

void to_json(json& j, const SolveReport& r) {
  j = json{{"beta", real_to_json(r.beta)},
           {"feasible", r.feasible},
           {"witness", optional_to_json(r.witness)},
           {"extreme_points", r.extreme_points},
           {"dimension", r.dimension},
           {"unique", r.unique()},
           {"enumeration_error", optional_to_json(r.enumeration_error)}};
}
void from_json(const json& j, SolveReport& r) {
  r.beta = real_from_json(j.at("beta"));
  r.feasible = j.at("feasible").get<bool>();
  r.witness = optional_from_json<Trace>(j.at("witness"));
  r.extreme_points = j.at("extreme_points").get<std::vector<Trace>>();
  r.dimension = j.at("dimension").get<int>();
  r.enumeration_error = optional_from_json<std::string>(j.at("enumeration_error"));
}

void to_json(json& j, const ScanPoint& p) {
  j = json{{"beta", real_to_json(p.beta)},
           {"feasible", p.feasible},
           {"dimension", p.dimension},
           {"extreme_count", p.extreme_count}};
}
void from_json(const json& j, ScanPoint& p) {
  p.beta = real_from_json(j.at("beta"));
  p.feasible = j.at("feasible").get<bool>();
  p.dimension = j.at("dimension").get<int>();
  p.extreme_count = j.at("extreme_count").get<std::size_t>();
}

void to_json(json& j, const ScanReport& r) {
  j = json{{"points", r.points}, {"monotone", r.monotone}, {"threshold", optional_to_json(r.threshold)}};
}
void from_json(const json& j, ScanReport& r) {
  r.points = j.at("points").get<std::vector<ScanPoint>>();
  r.monotone = j.at("monotone").get<bool>();
  r.threshold = optional_from_json<double>(j.at("threshold"));
}

void to_json(json& j, const GroundReport& r) {
  j = json{{"singular_vertices", r.singular_vertices}, {"dimension", optional_to_json(r.dimension)}};
}
void from_json(const json& j, GroundReport& r) {
  r.singular_vertices = j.at("singular_vertices").get<std::vector<VertexId>>();
  r.dimension = optional_from_json<int>(j.at("dimension"));
}

void to_json(json& j, const CriticalBetaReport& r) {
  j = json{{"beta", optional_to_json(r.beta)}, {"tol", r.tol}};
}
void from_json(const json& j, CriticalBetaReport& r) {
  r.beta = optional_from_json<double>(j.at("beta"));
  r.tol = j.at("tol").get<double>();
}

void to_json(json& j, const CoverageReport& r) {
  json cases = json::array();
  for (std::size_t i = 0; i < 9; ++i)
    cases.push_back(json{{"case", CoverageReport::label(i)},
                         {"count", r.counts[i]},
                         {"max_residual", real_to_json(r.max_residual[i])}});
  j = json{{"cases", cases}, {"trials", r.trials}, {"seed", r.seed}, {"k1_warning", r.k1_warning}};
}
void from_json(const json& j, CoverageReport& r) {
  const auto& cases = j.at("cases");
  if (!cases.is_array() || cases.size() != 9) throw InputError("coverage report needs nine cases");
  for (std::size_t i = 0; i < 9; ++i) {
    r.counts[i] = cases[i].at("count").get<std::size_t>();
    r.max_residual[i] = real_from_json(cases[i].at("max_residual"));
  }
  r.trials = j.at("trials").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.k1_warning = j.at("k1_warning").get<bool>();
}

void to_json(json& j, const PositivityReport& r) {
  j = json{{"min_value", real_to_json(r.min_value)},
           {"max_imag", real_to_json(r.max_imag)},
           {"trials", r.trials},
           {"seed", r.seed}};
}
void from_json(const json& j, PositivityReport& r) {
  r.min_value = real_from_json(j.at("min_value"));
  r.max_imag = real_from_json(j.at("max_imag"));
  r.trials = j.at("trials").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(json& j, const K1Violation& v) {
  j = json{{"vertex", v.vertex}, {"residual", real_to_json(v.residual)}};
}
void from_json(const json& j, K1Violation& v) {
  v.vertex = j.at("vertex").get<VertexId>();
  v.residual = real_from_json(j.at("residual"));
}

void to_json(json& j, const VerifyReport& r) {
  j = json{{"beta", real_to_json(r.beta)},
           {"tau", r.tau},
           {"coverage", r.coverage},
           {"positivity", r.positivity},
           {"k1_violations", r.k1_violations}};
}
void from_json(const json& j, VerifyReport& r) {
  r.beta = real_from_json(j.at("beta"));
  r.tau = j.at("tau").get<Trace>();
  r.coverage = j.at("coverage").get<CoverageReport>();
  r.positivity = j.at("positivity").get<PositivityReport>();
  r.k1_violations = j.at("k1_violations").get<std::vector<K1Violation>>();
}

void to_json(json& j, const MulReport& r) {
  j = json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"product", r.product}};
}
void from_json(const json& j, MulReport& r) {
  r.lhs = j.at("lhs").get<std::string>();
  r.rhs = j.at("rhs").get<std::string>();
  r.product = j.at("product").get<std::string>();
}

void to_json(json& j, const StarTruncationPoint& p) {
  j = json{{"n", p.n},
           {"threshold", optional_to_json(p.threshold)},
           {"feasible_for_all_beta", p.feasible_for_all_beta}};
}
void from_json(const json& j, StarTruncationPoint& p) {
  p.n = j.at("n").get<std::size_t>();
  p.threshold = optional_from_json<double>(j.at("threshold"));
  p.feasible_for_all_beta = j.at("feasible_for_all_beta").get<bool>();
}

}  // namespace kms
