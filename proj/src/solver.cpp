#include "kms/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "kms/error.hpp"
#include "kms/graph_io.hpp"
#include "kms/lp.hpp"

namespace kms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be a positive number");
}

Trace clean_trace(const Eigen::VectorXd& x) {
  std::vector<double> values(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) values[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  double mass = 0.0;
  for (double v : values) mass += v;
  for (double& v : values) v /= mass;
  return Trace(std::move(values));
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (std::uint64_t{1} << 40)) return r;
  }
  return r;
}

struct Constraints {
  Eigen::MatrixXd eq;   // eq * tau = eq_rhs
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq; // ineq * tau <= 0
};

Constraints assemble(const KmsPolytope& p) {
  const auto n = static_cast<Eigen::Index>(p.vertex_count);
  const auto n_k1 = p.equality_rows.rows();
  const auto n_zero = static_cast<Eigen::Index>(p.forced_zero.size());
  Constraints c;
  c.eq = Eigen::MatrixXd::Zero(n_k1 + n_zero + 1, n);
  c.eq_rhs = Eigen::VectorXd::Zero(n_k1 + n_zero + 1);
  if (n_k1 > 0) c.eq.topRows(n_k1) = p.equality_rows;
  for (Eigen::Index i = 0; i < n_zero; ++i) c.eq(n_k1 + i, p.forced_zero[static_cast<std::size_t>(i)].value) = 1.0;
  c.eq.row(n_k1 + n_zero).setOnes();
  c.eq_rhs(n_k1 + n_zero) = 1.0;

  const auto n_k2 = p.inequality_rows.rows();
  c.ineq = Eigen::MatrixXd::Zero(n + n_k2, n);
  c.ineq.topRows(n) = -Eigen::MatrixXd::Identity(n, n);
  if (n_k2 > 0) c.ineq.bottomRows(n_k2) = p.inequality_rows;
  return c;
}

std::optional<Trace> find_witness(const KmsPolytope& p) {
  const auto n = static_cast<Eigen::Index>(p.vertex_count);
  const Constraints c = assemble(p);
  const auto m_eq = c.eq.rows();
  const auto m_k2 = p.inequality_rows.rows();
  // Variables: tau, then one slack per K2 row.
  lp::Problem prob;
  prob.A = Eigen::MatrixXd::Zero(m_eq + m_k2, n + m_k2);
  prob.b = Eigen::VectorXd::Zero(m_eq + m_k2);
  prob.A.topLeftCorner(m_eq, n) = c.eq;
  prob.b.head(m_eq) = c.eq_rhs;
  if (m_k2 > 0) {
    prob.A.bottomLeftCorner(m_k2, n) = p.inequality_rows;
    prob.A.bottomRightCorner(m_k2, m_k2) = Eigen::MatrixXd::Identity(m_k2, m_k2);
  }
  prob.c = Eigen::VectorXd::Zero(n + m_k2);
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  return clean_trace(res.x.head(n));
}

// Vertices of the polytope via active-set enumeration.
std::vector<Eigen::VectorXd> enumerate_vertices(const KmsPolytope& p, double dedup_tol) {
  const auto n = static_cast<Eigen::Index>(p.vertex_count);
  const Constraints c = assemble(p);
  Eigen::FullPivLU<Eigen::MatrixXd> eq_lu(c.eq);
  eq_lu.setThreshold(1e-10);
  const auto rank = eq_lu.rank();
  const auto need = static_cast<std::size_t>(n - rank);
  const auto m = static_cast<std::size_t>(c.ineq.rows());

  if (binomial(m, need) > 5'000'000)
    throw Error("active-set enumeration would visit more than 5e6 subsets");

  std::vector<Eigen::VectorXd> out;
  std::vector<std::size_t> pick(need);
  for (std::size_t i = 0; i < need; ++i) pick[i] = i;

  Eigen::MatrixXd system(c.eq.rows() + static_cast<Eigen::Index>(need), n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(system.rows());
  system.topRows(c.eq.rows()) = c.eq;
  rhs.head(c.eq.rows()) = c.eq_rhs;

  for (;;) {
    for (std::size_t i = 0; i < need; ++i)
      system.row(c.eq.rows() + static_cast<Eigen::Index>(i)) = c.ineq.row(static_cast<Eigen::Index>(pick[i]));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      Eigen::VectorXd x = lu.solve(rhs);
      const bool eq_ok = ((c.eq * x - c.eq_rhs).cwiseAbs().maxCoeff() <= 1e-9);
      const bool ineq_ok = (c.ineq * x).maxCoeff() <= 1e-9;
      if (eq_ok && ineq_ok) {
        for (Eigen::Index i = 0; i < n; ++i)
          if (std::abs(x(i)) < 1e-14) x(i) = 0.0;
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Eigen::VectorXd& y) {
          return (x - y).cwiseAbs().maxCoeff() <= dedup_tol;
        });
        if (!seen) out.push_back(x);
      }
    }
    // Next combination in lexicographic order.
    std::size_t i = need;
    while (i > 0 && pick[i - 1] == m - need + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < need; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

int affine_dimension(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) return -1;
  if (points.size() == 1) return 0;
  Eigen::MatrixXd diffs(points.front().size(), static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i)
    diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points.front();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(1e-8);
  return static_cast<int>(lu.rank());
}

// Collatz-Wielandt iteration on a square nonnegative matrix. Returns the
// bracket midpoint on convergence.
std::optional<double> power_iteration(const Eigen::MatrixXd& m, double tol, int max_iter,
                                      double shift) {
  const auto n = m.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd y = m * x + shift * x;
    const double norm = y.sum();
    if (norm == 0.0) return 0.0;
    double lo = kInf, hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (x(i) <= 0.0) continue;
      const double ratio = y(i) / x(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    const double estimate = 0.5 * (lo + hi) - shift;
    if (hi - lo <= tol * std::max(estimate, std::numeric_limits<double>::min())) return estimate;
    x = y / norm;
  }
  return std::nullopt;
}

void tarjan(std::size_t v, const Eigen::MatrixXd& adj, std::vector<int>& index, std::vector<int>& low,
            std::vector<bool>& on_stack, std::vector<std::size_t>& stack, int& counter,
            std::vector<std::vector<std::size_t>>& out) {
  index[v] = low[v] = counter++;
  stack.push_back(v);
  on_stack[v] = true;
  const auto n = static_cast<std::size_t>(adj.rows());
  for (std::size_t w = 0; w < n; ++w) {
    if (adj(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) == 0.0) continue;
    if (index[w] < 0) {
      tarjan(w, adj, index, low, on_stack, stack, counter, out);
      low[v] = std::min(low[v], low[w]);
    } else if (on_stack[w]) {
      low[v] = std::min(low[v], index[w]);
    }
  }
  if (low[v] == index[v]) {
    std::vector<std::size_t> comp;
    std::size_t w = 0;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack[w] = false;
      comp.push_back(w);
    } while (w != v);
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
}

}  // namespace

Eigen::MatrixXd transfer_matrix(const WeightedGraph& g, double beta) {
  require_beta(beta);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.dst.value, e.src.value) += std::pow(e.weight, -beta);
  for (const auto& b : g.bundles()) a(b.dst.value, b.src.value) += b.series(beta);
  return a;
}

KmsPolytope build_polytope(const WeightedGraph& g, double beta) {
  Eigen::MatrixXd a = transfer_matrix(g, beta);
  KmsPolytope p;
  p.beta = beta;
  p.vertex_count = g.vertex_count();
  const auto n = static_cast<Eigen::Index>(p.vertex_count);

  for (const auto& b : g.bundles()) {
    if (std::isinf(a(b.dst.value, b.src.value))) {
      a(b.dst.value, b.src.value) = 0.0;
      if (std::find(p.forced_zero.begin(), p.forced_zero.end(), b.src) == p.forced_zero.end())
        p.forced_zero.push_back(b.src);
    }
  }
  std::sort(p.forced_zero.begin(), p.forced_zero.end());

  std::vector<Eigen::RowVectorXd> eq, ineq;
  for (VertexId v : g.vertices()) {
    const auto cls = vertex_class(g, v);
    if (cls.kind == VertexClass::Kind::Source) continue;
    Eigen::RowVectorXd row = a.row(v.value);
    row(v.value) -= 1.0;
    if (cls.kind == VertexClass::Kind::Regular) {
      p.equality_vertices.push_back(v);
      eq.push_back(row);
    } else {
      p.inequality_vertices.push_back(v);
      ineq.push_back(row);
    }
  }
  p.equality_rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(eq.size()), n);
  for (std::size_t i = 0; i < eq.size(); ++i) p.equality_rows.row(static_cast<Eigen::Index>(i)) = eq[i];
  p.inequality_rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ineq.size()), n);
  for (std::size_t i = 0; i < ineq.size(); ++i)
    p.inequality_rows.row(static_cast<Eigen::Index>(i)) = ineq[i];
  return p;
}

SolveReport solve(const WeightedGraph& g, double beta, const SolveOptions& options) {
  const KmsPolytope p = build_polytope(g, beta);
  SolveReport report;
  report.beta = beta;
  report.witness = find_witness(p);
  report.feasible = report.witness.has_value();
  if (!report.feasible) return report;

  if (g.vertex_count() > options.enumeration_cap) {
    report.enumeration_error = "graph has " + std::to_string(g.vertex_count()) +
                               " vertices, above the enumeration cap of " +
                               std::to_string(options.enumeration_cap);
    return report;
  }
  std::vector<Eigen::VectorXd> points;
  try {
    points = enumerate_vertices(p, options.dedup_tol);
  } catch (const Error& e) {
    report.enumeration_error = e.what();
    return report;
  }
  report.dimension = affine_dimension(points);
  for (const auto& x : points) report.extreme_points.push_back(clean_trace(x));
  if (report.extreme_points.size() == 1) report.witness = report.extreme_points.front();
  return report;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Eigen::MatrixXd& adjacency) {
  const auto n = static_cast<std::size_t>(adjacency.rows());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) tarjan(v, adjacency, index, low, on_stack, stack, counter, out);
  return out;
}

double spectral_radius(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw InputError("spectral_radius: matrix must be square");
  if (m.rows() == 0) return 0.0;
  if (!m.allFinite() || (m.array() < 0.0).any())
    throw InputError("spectral_radius: matrix must be finite and nonnegative");

  if (auto r = power_iteration(m, tol, 2000, 0.0)) return *r;

  // Per component: A_c + s I is primitive and has Perron root rho(A_c) + s.
  double best = 0.0;
  for (const auto& comp : strongly_connected_components(m)) {
    const auto k = static_cast<Eigen::Index>(comp.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j)
        sub(i, j) = m(static_cast<Eigen::Index>(comp[static_cast<std::size_t>(i)]),
                      static_cast<Eigen::Index>(comp[static_cast<std::size_t>(j)]));
    if (sub.sum() == 0.0) continue;
    const double shift = sub.rowwise().sum().maxCoeff() * 0.5;
    if (auto r = power_iteration(sub, tol, 200000, shift)) best = std::max(best, *r);
    else throw Error("spectral_radius: shifted iteration did not converge");
  }
  return best;
}

double spectral_radius(const WeightedGraph& g, double beta, double tol) {
  if (g.has_bundles()) throw InputError("spectral_radius needs a bundle-free graph");
  return spectral_radius(transfer_matrix(g, beta), tol);
}

std::optional<double> critical_beta(const WeightedGraph& g, double tol) {
  if (!g.weights_above_one())
    throw PreconditionError("critical_beta requires c(e)>1 for every edge");

  std::function<double(double)> radius;
  if (g.has_bundles()) {
    if (g.vertex_count() != 1)
      throw PreconditionError("critical_beta: graphs with bundles must be single-vertex templates");
    radius = [&g](double beta) { return transfer_matrix(g, beta)(0, 0); };
  } else {
    const Eigen::MatrixXd pattern = transfer_matrix(g, 1.0);
    if (strongly_connected_components(pattern).size() != 1)
      throw PreconditionError("critical_beta requires a strongly connected graph");
    radius = [&g](double beta) { return spectral_radius(g, beta); };
  }

  double lo = 1e-6;
  if (radius(lo) < 1.0) return std::nullopt;
  double hi = 64.0;
  while (radius(hi) >= 1.0) {
    hi *= 2.0;
    if (hi > 1024.0) return std::nullopt;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (radius(mid) >= 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ScanReport beta_scan(const WeightedGraph& g, std::span<const double> grid, const SolveOptions& options,
                     bool parallel) {
  for (double b : grid) require_beta(b);
  ScanReport report;
  report.points.resize(grid.size());
  const auto point = [&](std::size_t i) {
    const auto r = solve(g, grid[i], options);
    return ScanPoint{grid[i], r.feasible, r.dimension, r.extreme_points.size()};
  };
  if (parallel) {
    std::vector<std::future<ScanPoint>> jobs;
    jobs.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) jobs.push_back(std::async(std::launch::async, point, i));
    for (std::size_t i = 0; i < grid.size(); ++i) report.points[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) report.points[i] = point(i);
  }

  bool seen_feasible = false, seen_infeasible = false;
  for (const auto& p : report.points) {
    if (p.feasible) {
      if (!seen_feasible && seen_infeasible) report.threshold = p.beta;
      seen_feasible = true;
    } else {
      if (seen_feasible) report.monotone = false;
      seen_infeasible = true;
    }
  }
  if (!report.monotone) report.threshold.reset();
  return report;
}

GroundReport ground_simplex(const WeightedGraph& g) {
  if (!g.weights_above_one()) throw PreconditionError("ground states require c(e)>1 for every edge");
  GroundReport report;
  for (VertexId v : g.vertices())
    if (vertex_class(g, v).singular()) report.singular_vertices.push_back(v);
  if (!report.singular_vertices.empty())
    report.dimension = static_cast<int>(report.singular_vertices.size()) - 1;
  return report;
}

StarFamily StarFamily::geometric(double first, double ratio) {
  if (!(first > 1.0) || !(ratio > 1.0)) throw InputError("geometric star family needs first > 1, ratio > 1");
  StarFamily f;
  f.weight = [first, ratio](std::size_t n) { return first * std::pow(ratio, static_cast<double>(n) - 1.0); };
  f.tail_sum = [first, ratio](std::size_t n, double beta) {
    const double q = std::pow(ratio, -beta);
    if (q >= 1.0) return kInf;
    return std::pow(first * std::pow(ratio, static_cast<double>(n)), -beta) / (1.0 - q);
  };
  return f;
}

WeightedGraph star_graph(const StarFamily& family, std::size_t n) {
  GraphBuilder b;
  b.add_vertex("v0");
  for (std::size_t i = 1; i <= n; ++i) b.add_vertex("v" + std::to_string(i));
  b.add_vertex("vtail");
  for (std::size_t i = 1; i <= n; ++i)
    b.add_edge("e" + std::to_string(i), "v" + std::to_string(i), "v0", family.weight(i));
  ExplicitTailFamily tail;
  tail.tail_sum = [tail_sum = family.tail_sum, n](double beta) { return tail_sum(n, beta); };
  tail.description = "star tail beyond " + std::to_string(n);
  b.add_bundle("tail", "vtail", "v0", std::move(tail));
  return b.build();
}

std::vector<StarTruncationPoint> star_truncation_scan(const StarFamily& family, const StarProfile& profile,
                                                      std::span<const std::size_t> levels, double tol) {
  if (!std::isfinite(family.tail_sum(0, 64.0)))
    throw PreconditionError("star family is not summable for any beta in (0, 64]");

  std::vector<StarTruncationPoint> out;
  for (std::size_t n : levels) {
    const WeightedGraph g = star_graph(family, n);
    std::vector<double> raw = profile(n);
    if (raw.size() != n + 1) throw InputError("star profile must give N+1 weights");
    raw.push_back(0.0);  // vtail
    const Trace tau = Trace(std::move(raw)).normalized();

    const auto feasible = [&](double beta) {
      return check_k1(g, tau, beta, 0.0).pass() && check_k2(g, tau, beta, 0.0).pass();
    };
    StarTruncationPoint pt;
    pt.n = n;
    // Every a_n^{-beta} is positive, so spoke mass with an empty hub is
    // infeasible at every beta; decide it here rather than trusting underflow.
    const double spoke_mass = tau.mass() - tau[g.vertex("v0")];
    if (tau[g.vertex("v0")] == 0.0 && spoke_mass > 0.0) {
      out.push_back(pt);
      continue;
    }
    double lo = 1e-6, hi = 64.0;
    if (feasible(lo)) {
      pt.threshold = 0.0;
      pt.feasible_for_all_beta = true;
    } else {
      while (!feasible(hi) && hi < 1024.0) hi *= 2.0;
      if (feasible(hi)) {
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          (feasible(mid) ? hi : lo) = mid;
        }
        pt.threshold = hi;
      }
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace kms
