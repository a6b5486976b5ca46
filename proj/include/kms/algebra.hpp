#pragma once

// Finite linear combinations of monomials s_mu s_nu^* in the graph algebra.
//
// Products follow the prefix calculus
//   (s_mu s_nu^*)(s_alpha s_beta^*) = s_{mu alpha'} s_beta^*   if alpha = nu alpha'
//                                   = s_mu s_{beta nu'}^*      if nu = alpha nu'
//                                   = 0                        otherwise,
// which is all the algebra needs: no relation is applied implicitly, so an
// element's term map is its normal form. The Cuntz-Krieger relation
// p_v = sum_{r(e)=v} s_e s_e^* is available explicitly through expand().

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "kms/graph.hpp"

namespace kms {

using Complex = std::complex<double>;

/// s_mu s_nu^* with s(mu) = s(nu).
class Monomial {
 public:
  /// Throws InputError when s(mu) != s(nu).
  Monomial(Path mu, Path nu);

  static Monomial projection(VertexId v) { return {Path::at_vertex(v), Path::at_vertex(v)}; }
  /// s_mu.
  static Monomial isometry(const Path& mu) { return {mu, Path::at_vertex(mu.source())}; }
  /// s_nu^*.
  static Monomial adjoint_isometry(const Path& nu) { return {Path::at_vertex(nu.source()), nu}; }

  [[nodiscard]] const Path& mu() const { return mu_; }
  [[nodiscard]] const Path& nu() const { return nu_; }
  [[nodiscard]] VertexId source() const { return mu_.source(); }
  [[nodiscard]] bool in_core() const { return mu_.length() == nu_.length(); }
  [[nodiscard]] bool is_diagonal() const { return mu_ == nu_; }
  [[nodiscard]] bool uses_bundle() const { return mu_.uses_bundle() || nu_.uses_bundle(); }
  [[nodiscard]] Monomial adjoint() const { return {nu_, mu_}; }

  bool operator==(const Monomial&) const = default;
  auto operator<=>(const Monomial&) const = default;

 private:
  Path mu_;
  Path nu_;
};

class AlgebraElement {
 public:
  using TermMap = std::map<Monomial, Complex>;

  AlgebraElement() = default;
  AlgebraElement(Monomial m, Complex coefficient = 1.0);  // NOLINT(google-explicit-constructor)

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] Complex coefficient(const Monomial& m) const;

  /// Accumulates c into the coefficient of m; exact zeros are dropped.
  void add_term(const Monomial& m, Complex c);

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex scalar);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  bool operator==(const AlgebraElement&) const = default;

 private:
  TermMap terms_;
};

/// The single monomial of x*y, or nullopt when the product vanishes.
[[nodiscard]] std::optional<Monomial> mono_product(const Monomial& x, const Monomial& y);
[[nodiscard]] AlgebraElement mono_mul(const Monomial& x, const Monomial& y);
[[nodiscard]] AlgebraElement elem_mul(const AlgebraElement& x, const AlgebraElement& y);
[[nodiscard]] AlgebraElement scalar_mul(Complex s, const AlgebraElement& x);
[[nodiscard]] AlgebraElement elem_add(const AlgebraElement& x, const AlgebraElement& y);
[[nodiscard]] AlgebraElement adjoint(const AlgebraElement& x);

/// gamma_z: scales each term by z^{|mu|-|nu|}. Throws InputError unless |z| = 1 (1e-12).
[[nodiscard]] AlgebraElement gauge(Complex z, const AlgebraElement& x);

/// sigma_zeta: scales each term by c(mu)^{i zeta} c(nu)^{-i zeta}. zeta = i*beta
/// gives the analytic continuation c(mu)^{-beta} c(nu)^{beta}.
/// Throws UnsupportedPathError on bundle edges.
[[nodiscard]] AlgebraElement dynamics(const WeightedGraph& g, Complex zeta, const AlgebraElement& x);

/// The multiplier sigma_zeta applies to a single monomial.
[[nodiscard]] Complex dynamics_factor(const WeightedGraph& g, Complex zeta, const Monomial& m);

/// Conditional expectation onto the core: keeps terms with |mu| = |nu|.
[[nodiscard]] AlgebraElement cond_expect(const AlgebraElement& x);

/// Applies p_{s(mu)} = sum_{r(e)=s(mu)} s_e s_e^* inside the monomial.
/// Throws NotExpandableError when s(mu) is singular.
[[nodiscard]] AlgebraElement expand(const WeightedGraph& g, const Monomial& x);

struct FiltrationTag {
  enum class Kind { Fk, Ek, OffCore };
  std::size_t level = 0;
  Kind kind = Kind::Fk;
  bool operator==(const FiltrationTag&) const = default;
};

[[nodiscard]] FiltrationTag classify(const WeightedGraph& g, const Monomial& x);

/// x written in C_k = E_0 + ... + E_{k-1} + F_k.
struct CoreDecomposition {
  std::size_t level = 0;
  std::vector<AlgebraElement> singular_parts;  // E_0 ... E_{k-1}
  AlgebraElement top;                          // F_k

  [[nodiscard]] AlgebraElement sum() const;
};

/// Pushes regular-source terms below level k down to level k with expand();
/// terms with singular source at level j < k stay in E_j.
/// Throws DecompositionError for off-core terms or terms above level k.
[[nodiscard]] CoreDecomposition decompose_core(const WeightedGraph& g, const AlgebraElement& x,
                                               std::size_t k);

/// Expands every regular-source core term below level k until it reaches level k.
[[nodiscard]] AlgebraElement normal_form(const WeightedGraph& g, const AlgebraElement& x,
                                         std::size_t k);

}  // namespace kms
