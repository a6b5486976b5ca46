#pragma once

#include <Eigen/Dense>

namespace kms::lp {

/// minimize c.x subject to A x = b, x >= 0.
struct Problem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

/// Dense two-phase simplex with Bland's rule (lowest index enters, lowest
/// basic index leaves on ratio ties), so it terminates on degenerate problems.
/// `feasibility_tol` bounds the phase-one objective accepted as zero.
[[nodiscard]] Result solve(const Problem& problem, double feasibility_tol = 1e-9);

}  // namespace kms::lp
