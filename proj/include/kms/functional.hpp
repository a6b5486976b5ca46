#pragma once

// Vertex traces, the transfer functional and the functionals they induce on
// the graph algebra.
//
// For a trace tau on C_0(E^0) (a nonnegative weight per vertex) the transfer
// functional is
//
//   F(tau)(p_v) = sum_{e in r^{-1}(v)} c(e)^{-beta} tau_{s(e)},
//
// with bundle contributions evaluated through their closed-form series. A
// KMS trace satisfies F(tau)(p_v) = tau_v at regular vertices (K1) and
// F(tau)(p_v) <= tau_v everywhere (K2); it then determines the state
// phi(s_mu s_nu^*) = [mu = nu] c(mu)^{-beta} tau_{s(mu)}.

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "kms/algebra.hpp"
#include "kms/graph.hpp"

namespace kms {

inline constexpr double kDefaultTolerance = 1e-9;

/// Nonnegative vertex weights tau_v, indexed by vertex.
class Trace {
 public:
  Trace() = default;
  /// Throws InputError on negative or non-finite entries.
  explicit Trace(std::vector<double> values);

  static Trace uniform(std::size_t n);
  static Trace point_mass(std::size_t n, VertexId v);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](VertexId v) const { return values_.at(v.value); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double mass() const;
  /// Sum is 1 within tol.
  [[nodiscard]] bool is_state(double tol = kDefaultTolerance) const;
  /// Copy scaled to unit mass. Throws InputError on zero mass.
  [[nodiscard]] Trace normalized() const;

  bool operator==(const Trace&) const = default;

 private:
  std::vector<double> values_;
};

/// F(tau)(p_v). Bundles whose source carries zero mass contribute nothing;
/// otherwise a divergent bundle yields +infinity.
[[nodiscard]] double transfer(const WeightedGraph& g, const Trace& tau, double beta, VertexId v);

/// sum over mu in r^{-n}(v) of c(mu)^{-beta} tau_{s(mu)}. For n = 1 this is
/// transfer(); for n >= 2 the backward neighborhood must be bundle-free
/// (UnsupportedPathError otherwise).
[[nodiscard]] double n_step_transfer(const WeightedGraph& g, const Trace& tau, double beta,
                                     VertexId v, std::size_t n);

struct VertexCheck {
  VertexId vertex;
  double lhs = 0.0;       // F(tau)(p_v)
  double rhs = 0.0;       // tau_v
  double residual = 0.0;  // K1: |lhs - rhs|; K2: max(0, lhs - rhs)
  bool pass = true;
};

struct ConditionReport {
  std::vector<VertexCheck> rows;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] std::vector<VertexId> violations() const;
  [[nodiscard]] double max_residual() const;
};

/// K1 at every regular vertex.
[[nodiscard]] ConditionReport check_k1(const WeightedGraph& g, const Trace& tau, double beta,
                                       double tol = kDefaultTolerance);
/// K2 at every vertex.
[[nodiscard]] ConditionReport check_k2(const WeightedGraph& g, const Trace& tau, double beta,
                                       double tol = kDefaultTolerance);

/// phi = omega o Phi for the core functional omega given by tau. Defined for
/// any tau; it is a KMS state only when tau satisfies K1 and K2.
class KmsFunctional {
 public:
  /// Throws InputError unless beta > 0 and tau matches the graph.
  KmsFunctional(const WeightedGraph& g, Trace tau, double beta);

  [[nodiscard]] const WeightedGraph& graph() const { return *graph_; }
  [[nodiscard]] const Trace& tau() const { return tau_; }
  [[nodiscard]] double beta() const { return beta_; }

  [[nodiscard]] Complex operator()(const AlgebraElement& x) const;
  [[nodiscard]] double on_monomial(const Monomial& m) const;

 private:
  const WeightedGraph* graph_;
  Trace tau_;
  double beta_;
};

[[nodiscard]] Complex phi_eval(const KmsFunctional& f, const AlgebraElement& x);

/// phi(p_v) = tau_v, phi(s_mu s_nu^*) = 0 when |mu| > 0 or |nu| > 0.
class GroundFunctional {
 public:
  /// Throws InputError when tau charges a non-singular vertex.
  GroundFunctional(const WeightedGraph& g, Trace tau);

  [[nodiscard]] const Trace& tau() const { return tau_; }
  [[nodiscard]] Complex operator()(const AlgebraElement& x) const;

 private:
  Trace tau_;
};

[[nodiscard]] Complex ground_eval(const GroundFunctional& f, const AlgebraElement& x);

}  // namespace kms
