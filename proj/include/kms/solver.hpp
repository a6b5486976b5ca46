#pragma once

// Deciding and enumerating KMS traces.
//
// At inverse temperature beta the KMS traces are exactly the points of
//
//   { tau >= 0, sum tau = 1, (A tau)_v = tau_v at regular v,
//     (A tau)_v <= tau_v at infinite receivers v },
//
// where A = A_beta is the weighted backward adjacency matrix with entries
// A(v, w) = sum_{e: w -> v} c(e)^{-beta} (bundles enter through their series).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kms/functional.hpp"
#include "kms/graph.hpp"

namespace kms {

/// A_beta. Entries of divergent bundles are +infinity.
[[nodiscard]] Eigen::MatrixXd transfer_matrix(const WeightedGraph& g, double beta);

struct KmsPolytope {
  double beta = 1.0;
  std::size_t vertex_count = 0;
  std::vector<VertexId> equality_vertices;    // regular vertices
  Eigen::MatrixXd equality_rows;              // A row minus unit row
  std::vector<VertexId> inequality_vertices;  // infinite receivers
  Eigen::MatrixXd inequality_rows;
  /// Sources of divergent bundles: K2 can only hold with zero mass there.
  std::vector<VertexId> forced_zero;
};

/// Throws InputError unless beta > 0.
[[nodiscard]] KmsPolytope build_polytope(const WeightedGraph& g, double beta);

struct SolveOptions {
  std::size_t enumeration_cap = 15;  // max vertices for extreme-point enumeration
  double dedup_tol = 1e-8;
};

struct SolveReport {
  double beta = 1.0;
  bool feasible = false;
  std::optional<Trace> witness;
  std::vector<Trace> extreme_points;
  int dimension = -1;  // affine dimension; -1 when infeasible or not enumerated
  std::optional<std::string> enumeration_error;

  [[nodiscard]] bool unique() const { return feasible && dimension == 0; }
};

[[nodiscard]] SolveReport solve(const WeightedGraph& g, double beta, const SolveOptions& options = {});

/// Perron root of a nonnegative square matrix: power iteration from the
/// uniform vector with Collatz-Wielandt bounds, falling back to shifted
/// iteration per strongly connected component when that does not converge
/// (periodic or reducible matrices).
[[nodiscard]] double spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-13);
/// Radius of A_beta. Throws InputError on graphs with bundles.
[[nodiscard]] double spectral_radius(const WeightedGraph& g, double beta, double tol = 1e-13);

/// Least beta with unit Perron root (finite strongly connected graphs) or unit
/// series (single-vertex bundle templates), by bisection to absolute tol.
/// nullopt when the radius stays below 1 for all beta > 0, or stays above 1
/// up to beta = 1024. Throws PreconditionError when a weight is <= 1 or the
/// graph is neither shape.
[[nodiscard]] std::optional<double> critical_beta(const WeightedGraph& g, double tol = 1e-9);

/// Strongly connected components (Tarjan), each as a list of vertex indices.
[[nodiscard]] std::vector<std::vector<std::size_t>> strongly_connected_components(
    const Eigen::MatrixXd& adjacency);

struct ScanPoint {
  double beta = 0.0;
  bool feasible = false;
  int dimension = -1;
  std::size_t extreme_count = 0;
};

struct ScanReport {
  std::vector<ScanPoint> points;
  /// Feasibility never switches back off along the grid.
  bool monotone = true;
  /// First feasible grid point after an infeasible one, when monotone.
  std::optional<double> threshold;
};

/// Solves at every grid point; points may be evaluated concurrently, results
/// stay in grid order.
[[nodiscard]] ScanReport beta_scan(const WeightedGraph& g, std::span<const double> grid,
                                   const SolveOptions& options = {}, bool parallel = false);

struct GroundReport {
  std::vector<VertexId> singular_vertices;
  /// Dimension of the ground-state simplex; nullopt when there are no singular vertices.
  std::optional<int> dimension;
};

/// Ground states correspond to probability measures on the singular
/// vertices. Throws PreconditionError unless every weight exceeds 1.
[[nodiscard]] GroundReport ground_simplex(const WeightedGraph& g);

/// Weights a_1, a_2, ... of the star's spokes e_n: v_n -> v_0.
struct StarFamily {
  std::function<double(std::size_t)> weight;               // n >= 1
  std::function<double(std::size_t, double)> tail_sum;     // (N, beta) -> sum_{n>N} a_n^{-beta}

  /// a_n = first * ratio^{n-1}.
  static StarFamily geometric(double first, double ratio);
};

/// Unnormalized weights for v_0, v_1, ..., v_N at truncation level N.
using StarProfile = std::function<std::vector<double>(std::size_t)>;

/// Star truncated at N: hub v0, spokes v1..vN, and a source vtail whose
/// bundle carries the remaining weights a_{N+1}, a_{N+2}, ... into v0, so the
/// hub keeps infinitely many incoming edges.
[[nodiscard]] WeightedGraph star_graph(const StarFamily& family, std::size_t n);

struct StarTruncationPoint {
  std::size_t n = 0;
  /// Least beta where the profile satisfies K1 and K2; 0 when it does so for
  /// every beta > 0; nullopt when it never does.
  std::optional<double> threshold;
  bool feasible_for_all_beta = false;
};

/// For each N, builds star_graph(family, N) with the normalized profile (zero
/// mass on vtail) and bisects the feasibility threshold.
/// Throws PreconditionError when the family is not summable for any beta.
[[nodiscard]] std::vector<StarTruncationPoint> star_truncation_scan(
    const StarFamily& family, const StarProfile& profile, std::span<const std::size_t> levels,
    double tol = 1e-12);

}  // namespace kms
