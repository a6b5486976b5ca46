#pragma once

// Numerical certificates for the KMS and ground-state characterizations.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kms/algebra.hpp"
#include "kms/functional.hpp"
#include "kms/graph.hpp"

namespace kms {

/// Which branch of the product calculus each side of the KMS identity takes,
/// for x = s_mu s_nu^* and y = s_zeta s_eta^*:
///   row    (x y):          1 if zeta = nu zeta', 2 if nu = zeta nu', 3 otherwise
///   column (y sigma(x)):   a if mu = eta mu',    b if eta = mu eta', c otherwise
/// When both prefix relations hold the first listed branch wins.
struct CaseLabel {
  int row = 1;      // 1..3
  char column = 'a';  // 'a'..'c'

  [[nodiscard]] std::string str() const { return std::to_string(row) + column; }
  [[nodiscard]] std::size_t index() const {
    return static_cast<std::size_t>((row - 1) * 3 + (column - 'a'));
  }
  bool operator==(const CaseLabel&) const = default;
};

[[nodiscard]] CaseLabel nine_case(const Monomial& x, const Monomial& y);

struct KmsCheckResult {
  Complex lhs;  // phi(x y)
  Complex rhs;  // phi(y sigma_{i beta}(x))
  CaseLabel case_label;
  double residual = 0.0;
  /// tau fails K1: the identity is not guaranteed.
  bool k1_warning = false;
};

[[nodiscard]] KmsCheckResult kms_identity(const KmsFunctional& phi, const Monomial& x, const Monomial& y,
                                          bool k1_warning = false);
/// Checks K1 at tol first, then evaluates both sides.
[[nodiscard]] KmsCheckResult kms_identity(const WeightedGraph& g, const Trace& tau, double beta,
                                          const Monomial& x, const Monomial& y,
                                          double tol = kDefaultTolerance);

struct SamplerConfig {
  std::size_t max_length = 2;
  std::size_t trials = 500;
  std::uint64_t seed = 7;
};

struct CoverageReport {
  std::array<std::size_t, 9> counts{};
  std::array<double, 9> max_residual{};
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool k1_warning = false;

  [[nodiscard]] bool all_cases_hit() const;
  [[nodiscard]] double overall_max_residual() const;
  static std::string label(std::size_t index);
};

/// Every bundle-free monomial s_mu s_nu^* with |mu|, |nu| <= max_length.
[[nodiscard]] std::vector<Monomial> all_monomials(const WeightedGraph& g, std::size_t max_length);

/// kms_identity on sampled monomial pairs (uniform over all_monomials).
[[nodiscard]] CoverageReport case_coverage(const WeightedGraph& g, const Trace& tau, double beta,
                                           const SamplerConfig& config);

/// kms_identity on every pair of monomials with paths <= max_length.
[[nodiscard]] CoverageReport exhaustive_coverage(const WeightedGraph& g, const Trace& tau, double beta,
                                                 std::size_t max_length);

struct K1Violation {
  VertexId vertex;
  double residual = 0.0;  // |phi(p_v) - phi(expand(p_v))|
};

/// Regular vertices where phi(p_v) and phi(sum_{r(e)=v} s_e s_e^*) differ by more than 1e-9.
[[nodiscard]] std::vector<K1Violation> k1_violation_detect(const WeightedGraph& g, const Trace& tau,
                                                           double beta);

using Functional = std::function<Complex(const AlgebraElement&)>;

struct GroundBoundResult {
  bool bounded = true;
  double max_modulus = 0.0;
  std::vector<double> moduli;  // one per grid point
};

/// |f(x sigma_{i y}(z))| over y in imag_grid. For monomials this modulus is
/// K r^y, so bounded means it never increases along the grid (relative slack
/// 1e-12). Throws PreconditionError unless all weights exceed 1.
[[nodiscard]] GroundBoundResult ground_bound_check(const WeightedGraph& g, const Functional& f,
                                                   const Monomial& x, const Monomial& z,
                                                   std::span<const double> imag_grid);
[[nodiscard]] GroundBoundResult ground_bound_check(const WeightedGraph& g, const GroundFunctional& f,
                                                   const Monomial& x, const Monomial& z,
                                                   std::span<const double> imag_grid);

struct PositivityReport {
  double min_value = 0.0;      // min Re phi(a^* a)
  double max_imag = 0.0;       // max |Im phi(a^* a)|
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Samples core elements a with at most 6 terms and paths of length <= max_level.
[[nodiscard]] PositivityReport positivity_sample(const WeightedGraph& g, const Trace& tau, double beta,
                                                 std::size_t max_level, std::size_t trials,
                                                 std::uint64_t seed);

}  // namespace kms
