#pragma once

// Shared fixtures and independent oracles for the test binaries. The oracles
// here deliberately avoid the library's path enumeration and solver.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kms/graph.hpp"
#include "kms/graph_io.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(KMS_DATA_DIR) + "/" + name; }

inline kms::WeightedGraph load(const std::string& name, kms::GraphOptions o = {}) {
  return kms::load_graph(data_path(name), o);
}

/// n vertices v0.., m edges e0.. with uniform endpoints and weights in (lo, hi].
inline kms::WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, double lo,
                                       double hi) {
  kms::GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> vert(0, n - 1);
  std::uniform_real_distribution<double> w(lo, hi);
  for (std::size_t j = 0; j < m; ++j) {
    double weight = w(rng);
    if (weight <= lo) weight = hi;  // keep the interval half-open on the left
    b.add_edge("e" + std::to_string(j), "v" + std::to_string(vert(rng)), "v" + std::to_string(vert(rng)),
               weight);
  }
  return b.build();
}

/// Transfer matrix A(v, w) = sum_{e: w -> v} c(e)^{-beta}, from the edge list.
inline std::vector<std::vector<double>> dense_transfer(const kms::WeightedGraph& g, double beta) {
  const auto n = g.vertex_count();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) a[e.dst.value][e.src.value] += std::pow(e.weight, -beta);
  return a;
}

/// sum over edge sequences of length n ending at v of c^{-beta} tau_{source},
/// by depth-first search over the raw edge list.
inline double brute_n_step(const kms::WeightedGraph& g, const std::vector<double>& tau, double beta,
                           std::uint32_t v, std::size_t n) {
  if (n == 0) return tau[v];
  double total = 0.0;
  for (const auto& e : g.edges())
    if (e.dst.value == v) total += std::pow(e.weight, -beta) * brute_n_step(g, tau, beta, e.src.value, n - 1);
  return total;
}

inline bool has_in_edge(const kms::WeightedGraph& g, std::uint32_t v) {
  for (const auto& e : g.edges())
    if (e.dst.value == v) return true;
  return false;
}

/// Grid search over the probability simplex with the given step. A grid point
/// counts as feasible when every K1 residual and K2 excess is below `slack`.
inline bool grid_feasible(const kms::WeightedGraph& g, double beta, double step, double slack) {
  const auto n = g.vertex_count();
  const auto a = dense_transfer(g, beta);
  const int ticks = static_cast<int>(std::lround(1.0 / step));
  std::vector<int> k(n, 0);
  // Enumerate compositions of `ticks` into n parts.
  std::vector<double> tau(n);
  auto check = [&]() {
    for (std::size_t v = 0; v < n; ++v) {
      double lhs = 0.0;
      for (std::size_t w = 0; w < n; ++w) lhs += a[v][w] * tau[w];
      if (has_in_edge(g, static_cast<std::uint32_t>(v))) {
        if (std::abs(lhs - tau[v]) > slack) return false;
      }
    }
    return true;
  };
  auto rec = [&](auto&& self, std::size_t i, int left) -> bool {
    if (i + 1 == n) {
      k[i] = left;
      for (std::size_t j = 0; j < n; ++j) tau[j] = k[j] * step;
      return check();
    }
    for (int t = 0; t <= left; ++t) {
      k[i] = t;
      if (self(self, i + 1, left - t)) return true;
    }
    return false;
  };
  return rec(rec, 0, ticks);
}

}  // namespace fixtures
