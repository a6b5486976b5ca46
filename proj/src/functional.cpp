#include "kms/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kms/error.hpp"

namespace kms {

Trace::Trace(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v) || v < 0.0) throw InputError("trace values must be finite and >= 0");
}

Trace Trace::uniform(std::size_t n) {
  if (n == 0) throw InputError("uniform trace needs at least one vertex");
  return Trace(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Trace Trace::point_mass(std::size_t n, VertexId v) {
  std::vector<double> values(n, 0.0);
  values.at(v.value) = 1.0;
  return Trace(std::move(values));
}

double Trace::mass() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

bool Trace::is_state(double tol) const { return std::abs(mass() - 1.0) <= tol; }

Trace Trace::normalized() const {
  const double m = mass();
  if (!(m > 0.0)) throw InputError("cannot normalize a trace of zero mass");
  std::vector<double> values = values_;
  for (double& v : values) v /= m;
  return Trace(std::move(values));
}

namespace {

void require_match(const WeightedGraph& g, const Trace& tau) {
  if (tau.size() != g.vertex_count())
    throw InputError("trace has " + std::to_string(tau.size()) + " entries, graph has " +
                     std::to_string(g.vertex_count()) + " vertices");
}

}  // namespace

double transfer(const WeightedGraph& g, const Trace& tau, double beta, VertexId v) {
  require_match(g, tau);
  double sum = 0.0;
  for (std::uint32_t e : g.in_edges(v)) {
    const auto& edge = g.edges()[e];
    sum += std::pow(edge.weight, -beta) * tau[edge.src];
  }
  for (std::uint32_t b : g.in_bundles(v)) {
    const auto& bundle = g.bundles()[b];
    const double upstream = tau[bundle.src];
    if (upstream == 0.0) continue;
    sum += bundle.series(beta) * upstream;
  }
  return sum;
}

double n_step_transfer(const WeightedGraph& g, const Trace& tau, double beta, VertexId v,
                       std::size_t n) {
  if (n == 0) throw InputError("n_step_transfer needs n >= 1");
  if (n == 1) return transfer(g, tau, beta, v);
  require_match(g, tau);
  double sum = 0.0;
  for (const auto& mu : paths_into(g, v, n))
    sum += std::exp(-beta * path_log_weight(g, mu)) * tau[mu.source()];
  return sum;
}

bool ConditionReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const VertexCheck& r) { return r.pass; });
}

std::vector<VertexId> ConditionReport::violations() const {
  std::vector<VertexId> out;
  for (const auto& r : rows)
    if (!r.pass) out.push_back(r.vertex);
  return out;
}

double ConditionReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.residual);
  return m;
}

ConditionReport check_k1(const WeightedGraph& g, const Trace& tau, double beta, double tol) {
  ConditionReport report;
  for (VertexId v : g.vertices()) {
    if (vertex_class(g, v).kind != VertexClass::Kind::Regular) continue;
    VertexCheck row{v, transfer(g, tau, beta, v), tau[v]};
    row.residual = std::abs(row.lhs - row.rhs);
    row.pass = row.residual <= tol;
    report.rows.push_back(row);
  }
  return report;
}

ConditionReport check_k2(const WeightedGraph& g, const Trace& tau, double beta, double tol) {
  ConditionReport report;
  for (VertexId v : g.vertices()) {
    VertexCheck row{v, transfer(g, tau, beta, v), tau[v]};
    row.residual = std::max(0.0, row.lhs - row.rhs);
    row.pass = row.lhs <= row.rhs + tol;
    report.rows.push_back(row);
  }
  return report;
}

KmsFunctional::KmsFunctional(const WeightedGraph& g, Trace tau, double beta)
    : graph_(&g), tau_(std::move(tau)), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be a positive number");
  require_match(g, tau_);
}

double KmsFunctional::on_monomial(const Monomial& m) const {
  if (m.uses_bundle())
    throw UnsupportedPathError("phi is evaluated on bundle-free monomials only");
  if (!m.is_diagonal()) return 0.0;
  return std::exp(-beta_ * path_log_weight(*graph_, m.mu())) * tau_[m.source()];
}

Complex KmsFunctional::operator()(const AlgebraElement& x) const {
  Complex sum{};
  for (const auto& [m, c] : x.terms()) sum += c * on_monomial(m);
  return sum;
}

Complex phi_eval(const KmsFunctional& f, const AlgebraElement& x) { return f(x); }

GroundFunctional::GroundFunctional(const WeightedGraph& g, Trace tau) : tau_(std::move(tau)) {
  require_match(g, tau_);
  for (VertexId v : g.vertices())
    if (tau_[v] != 0.0 && !vertex_class(g, v).singular())
      throw InputError("ground functional: tau charges non-singular vertex '" + g.vertex_name(v) +
                       "'");
}

Complex GroundFunctional::operator()(const AlgebraElement& x) const {
  Complex sum{};
  for (const auto& [m, c] : x.terms())
    if (m.mu().is_vertex() && m.nu().is_vertex()) sum += c * tau_[m.source()];
  return sum;
}

Complex ground_eval(const GroundFunctional& f, const AlgebraElement& x) { return f(x); }

}  // namespace kms
