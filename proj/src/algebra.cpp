#include "kms/algebra.hpp"

#include <cmath>

#include "kms/error.hpp"

namespace kms {

Monomial::Monomial(Path mu, Path nu) : mu_(std::move(mu)), nu_(std::move(nu)) {
  if (mu_.source() != nu_.source())
    throw InputError("monomial s_mu s_nu^* requires s(mu) = s(nu)");
}

AlgebraElement::AlgebraElement(Monomial m, Complex coefficient) {
  if (coefficient != Complex{}) terms_.emplace(std::move(m), coefficient);
}

Complex AlgebraElement::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

void AlgebraElement::add_term(const Monomial& m, Complex c) {
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == Complex{}) terms_.erase(it);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex scalar) {
  if (scalar == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= scalar;
    // Underflow can still produce an exact zero.
    it = it->second == Complex{} ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return elem_mul(a, b); }

std::optional<Monomial> mono_product(const Monomial& x, const Monomial& y) {
  if (auto rest = strip_prefix(y.mu(), x.nu())) return Monomial(concat(x.mu(), *rest), y.nu());
  if (auto rest = strip_prefix(x.nu(), y.mu())) return Monomial(x.mu(), concat(y.nu(), *rest));
  return std::nullopt;
}

AlgebraElement mono_mul(const Monomial& x, const Monomial& y) {
  if (auto m = mono_product(x, y)) return AlgebraElement(std::move(*m));
  return {};
}

AlgebraElement elem_mul(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement out;
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms())
      if (auto m = mono_product(mx, my)) out.add_term(*m, cx * cy);
  return out;
}

AlgebraElement scalar_mul(Complex s, const AlgebraElement& x) { return s * x; }

AlgebraElement elem_add(const AlgebraElement& x, const AlgebraElement& y) { return x + y; }

AlgebraElement adjoint(const AlgebraElement& x) {
  AlgebraElement out;
  for (const auto& [m, c] : x.terms()) out.add_term(m.adjoint(), std::conj(c));
  return out;
}

namespace {

Complex int_power(Complex z, long k) {
  if (k < 0) {
    z = std::conj(z);  // unimodular: z^{-1} = conj(z)
    k = -k;
  }
  Complex r{1.0, 0.0};
  for (long i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

AlgebraElement gauge(Complex z, const AlgebraElement& x) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw InputError("gauge parameter must satisfy |z| = 1");
  AlgebraElement out;
  for (const auto& [m, c] : x.terms()) {
    const long k = static_cast<long>(m.mu().length()) - static_cast<long>(m.nu().length());
    out.add_term(m, c * int_power(z, k));
  }
  return out;
}

Complex dynamics_factor(const WeightedGraph& g, Complex zeta, const Monomial& m) {
  const double delta = path_log_weight(g, m.mu()) - path_log_weight(g, m.nu());
  if (delta == 0.0) return {1.0, 0.0};
  return std::exp(Complex{0.0, 1.0} * zeta * delta);
}

AlgebraElement dynamics(const WeightedGraph& g, Complex zeta, const AlgebraElement& x) {
  AlgebraElement out;
  for (const auto& [m, c] : x.terms()) out.add_term(m, c * dynamics_factor(g, zeta, m));
  return out;
}

AlgebraElement cond_expect(const AlgebraElement& x) {
  AlgebraElement out;
  for (const auto& [m, c] : x.terms())
    if (m.in_core()) out.add_term(m, c);
  return out;
}

AlgebraElement expand(const WeightedGraph& g, const Monomial& x) {
  const VertexId v = x.source();
  const auto cls = vertex_class(g, v);
  if (cls.singular())
    throw NotExpandableError("vertex '" + g.vertex_name(v) + "' is " + to_string(cls) +
                             "; p_v = sum s_e s_e^* needs 0 < |r^{-1}(v)| < infinity");
  AlgebraElement out;
  for (std::uint32_t e : g.in_edges(v)) {
    const Path edge = g.path({EdgeRef::finite(e)});
    out.add_term(Monomial(concat(x.mu(), edge), concat(x.nu(), edge)), 1.0);
  }
  return out;
}

FiltrationTag classify(const WeightedGraph& g, const Monomial& x) {
  if (!x.in_core()) return {std::max(x.mu().length(), x.nu().length()), FiltrationTag::Kind::OffCore};
  const bool singular = vertex_class(g, x.source()).singular();
  return {x.mu().length(), singular ? FiltrationTag::Kind::Ek : FiltrationTag::Kind::Fk};
}

AlgebraElement CoreDecomposition::sum() const {
  AlgebraElement out = top;
  for (const auto& part : singular_parts) out += part;
  return out;
}

CoreDecomposition decompose_core(const WeightedGraph& g, const AlgebraElement& x, std::size_t k) {
  CoreDecomposition out;
  out.level = k;
  out.singular_parts.resize(k);

  // Work list of terms, processed level by level.
  AlgebraElement pending = x;
  while (!pending.is_zero()) {
    AlgebraElement next;
    for (const auto& [m, c] : pending.terms()) {
      if (!m.in_core()) throw DecompositionError("term is not in the core (|mu| != |nu|)");
      const std::size_t level = m.mu().length();
      if (level > k)
        throw DecompositionError("term at level " + std::to_string(level) +
                                 " exceeds the level budget " + std::to_string(k));
      if (level == k) {
        out.top.add_term(m, c);
      } else if (vertex_class(g, m.source()).singular()) {
        out.singular_parts[level].add_term(m, c);
      } else {
        next += c * expand(g, m);
      }
    }
    pending = std::move(next);
  }
  return out;
}

AlgebraElement normal_form(const WeightedGraph& g, const AlgebraElement& x, std::size_t k) {
  AlgebraElement out;
  AlgebraElement pending = x;
  while (!pending.is_zero()) {
    AlgebraElement next;
    for (const auto& [m, c] : pending.terms()) {
      if (m.in_core() && m.mu().length() < k && !vertex_class(g, m.source()).singular())
        next += c * expand(g, m);
      else
        out.add_term(m, c);
    }
    pending = std::move(next);
  }
  return out;
}

}  // namespace kms
