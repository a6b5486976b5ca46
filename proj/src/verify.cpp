#include "kms/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "kms/error.hpp"

namespace kms {

CaseLabel nine_case(const Monomial& x, const Monomial& y) {
  CaseLabel label;
  if (strip_prefix(y.mu(), x.nu())) label.row = 1;
  else if (strip_prefix(x.nu(), y.mu())) label.row = 2;
  else label.row = 3;
  if (strip_prefix(x.mu(), y.nu())) label.column = 'a';
  else if (strip_prefix(y.nu(), x.mu())) label.column = 'b';
  else label.column = 'c';
  return label;
}

KmsCheckResult kms_identity(const KmsFunctional& phi, const Monomial& x, const Monomial& y,
                            bool k1_warning) {
  const Complex i_beta{0.0, phi.beta()};
  const AlgebraElement ax(x), ay(y);
  KmsCheckResult r;
  r.lhs = phi(ax * ay);
  r.rhs = phi(ay * dynamics(phi.graph(), i_beta, ax));
  r.case_label = nine_case(x, y);
  r.residual = std::abs(r.lhs - r.rhs);
  r.k1_warning = k1_warning;
  return r;
}

KmsCheckResult kms_identity(const WeightedGraph& g, const Trace& tau, double beta, const Monomial& x,
                            const Monomial& y, double tol) {
  const bool warn = !check_k1(g, tau, beta, tol).pass();
  return kms_identity(KmsFunctional(g, tau, beta), x, y, warn);
}

bool CoverageReport::all_cases_hit() const {
  return std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
}

double CoverageReport::overall_max_residual() const {
  return *std::max_element(max_residual.begin(), max_residual.end());
}

std::string CoverageReport::label(std::size_t index) {
  return CaseLabel{static_cast<int>(index / 3) + 1, static_cast<char>('a' + index % 3)}.str();
}

std::vector<Monomial> all_monomials(const WeightedGraph& g, std::size_t max_length) {
  std::map<VertexId, std::vector<Path>> by_source;
  for (auto& p : all_paths(g, max_length)) by_source[p.source()].push_back(std::move(p));
  std::vector<Monomial> out;
  for (const auto& [v, paths] : by_source)
    for (const auto& mu : paths)
      for (const auto& nu : paths) out.emplace_back(mu, nu);
  return out;
}

namespace {

void record(CoverageReport& report, const KmsCheckResult& r) {
  const auto idx = r.case_label.index();
  ++report.counts[idx];
  report.max_residual[idx] = std::max(report.max_residual[idx], r.residual);
}

}  // namespace

CoverageReport case_coverage(const WeightedGraph& g, const Trace& tau, double beta,
                             const SamplerConfig& config) {
  CoverageReport report;
  report.seed = config.seed;
  report.trials = config.trials;
  report.k1_warning = !check_k1(g, tau, beta).pass();
  const KmsFunctional phi(g, tau, beta);
  const auto monomials = all_monomials(g, config.max_length);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, monomials.size() - 1);
  for (std::size_t t = 0; t < config.trials; ++t) {
    const auto& x = monomials[pick(rng)];
    const auto& y = monomials[pick(rng)];
    record(report, kms_identity(phi, x, y, report.k1_warning));
  }
  return report;
}

CoverageReport exhaustive_coverage(const WeightedGraph& g, const Trace& tau, double beta,
                                   std::size_t max_length) {
  CoverageReport report;
  report.k1_warning = !check_k1(g, tau, beta).pass();
  const KmsFunctional phi(g, tau, beta);
  const auto monomials = all_monomials(g, max_length);
  for (const auto& x : monomials)
    for (const auto& y : monomials) {
      record(report, kms_identity(phi, x, y, report.k1_warning));
      ++report.trials;
    }
  return report;
}

std::vector<K1Violation> k1_violation_detect(const WeightedGraph& g, const Trace& tau, double beta) {
  const KmsFunctional phi(g, tau, beta);
  std::vector<K1Violation> out;
  for (VertexId v : g.vertices()) {
    if (vertex_class(g, v).kind != VertexClass::Kind::Regular) continue;
    const Monomial pv = Monomial::projection(v);
    const double residual = std::abs(phi(AlgebraElement(pv)) - phi(expand(g, pv)));
    if (residual > 1e-9) out.push_back({v, residual});
  }
  return out;
}

GroundBoundResult ground_bound_check(const WeightedGraph& g, const Functional& f, const Monomial& x,
                                     const Monomial& z, std::span<const double> imag_grid) {
  if (!g.weights_above_one())
    throw PreconditionError("ground-state boundedness requires c(e)>1 for every edge");
  GroundBoundResult out;
  const AlgebraElement ax(x), az(z);
  std::vector<std::pair<double, double>> samples;  // (y, modulus)
  for (double y : imag_grid) {
    if (y < 0.0) throw InputError("ground_bound_check samples the closed upper half-plane only");
    const double modulus = std::abs(f(ax * dynamics(g, Complex{0.0, y}, az)));
    out.moduli.push_back(modulus);
    out.max_modulus = std::max(out.max_modulus, modulus);
    samples.emplace_back(y, modulus);
  }
  // For monomials the modulus is K r^y, bounded on y >= 0 exactly when it
  // never increases along the grid.
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].second > samples[i - 1].second + 1e-12 * std::max(1.0, samples[i - 1].second))
      out.bounded = false;
  return out;
}

GroundBoundResult ground_bound_check(const WeightedGraph& g, const GroundFunctional& f, const Monomial& x,
                                     const Monomial& z, std::span<const double> imag_grid) {
  return ground_bound_check(g, Functional([&f](const AlgebraElement& a) { return f(a); }), x, z,
                            imag_grid);
}

PositivityReport positivity_sample(const WeightedGraph& g, const Trace& tau, double beta,
                                   std::size_t max_level, std::size_t trials, std::uint64_t seed) {
  const KmsFunctional phi(g, tau, beta);
  // Paths grouped by length, and by (length, source).
  std::vector<std::vector<Path>> by_length(max_level + 1);
  std::map<std::pair<std::size_t, VertexId>, std::vector<Path>> by_length_source;
  for (const auto& p : all_paths(g, max_level)) {
    by_length[p.length()].push_back(p);
    by_length_source[{p.length(), p.source()}].push_back(p);
  }
  std::vector<std::size_t> levels;
  for (std::size_t j = 0; j <= max_level; ++j)
    if (!by_length[j].empty()) levels.push_back(j);

  PositivityReport report;
  report.trials = trials;
  report.seed = seed;
  report.min_value = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> term_count(1, 6);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    AlgebraElement a;
    const std::size_t terms = term_count(rng);
    for (std::size_t k = 0; k < terms; ++k) {
      const std::size_t level = levels[std::uniform_int_distribution<std::size_t>(0, levels.size() - 1)(rng)];
      const auto& paths = by_length[level];
      const Path& mu = paths[std::uniform_int_distribution<std::size_t>(0, paths.size() - 1)(rng)];
      const auto& partners = by_length_source.at({level, mu.source()});
      const Path& nu = partners[std::uniform_int_distribution<std::size_t>(0, partners.size() - 1)(rng)];
      const double re = coeff(rng);
      const double im = coeff(rng);
      a.add_term(Monomial(mu, nu), Complex{re, im});
    }
    const Complex value = phi(adjoint(a) * a);
    report.min_value = std::min(report.min_value, value.real());
    report.max_imag = std::max(report.max_imag, std::abs(value.imag()));
  }
  return report;
}

}  // namespace kms
