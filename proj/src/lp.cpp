#include "kms/lp.hpp"

#include <limits>
#include <vector>

#include "kms/error.hpp"

namespace kms::lp {

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  Tableau(const Problem& p) : m_(p.A.rows()), n_(p.A.cols()) {
    // Columns: structural [0, n), artificial [n, n + m), rhs last.
    t_ = Eigen::MatrixXd::Zero(m_, n_ + m_ + 1);
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = p.b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * p.A.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign * p.b(i);
      basis_[i] = n_ + i;
    }
    allowed_.assign(n_ + m_, true);
  }

  Eigen::Index rhs() const { return n_ + m_; }

  // Reduced costs for objective `cost` over all columns; last entry is -z.
  Eigen::RowVectorXd reduced(const Eigen::VectorXd& cost) const {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n_ + m_ + 1);
    r.head(n_ + m_) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active_row(i)) r -= cost(basis_[i]) * t_.row(i);
    return r;
  }

  // Runs simplex iterations; returns false when unbounded.
  bool optimize(const Eigen::VectorXd& cost, int& pivots) {
    for (;;) {
      const Eigen::RowVectorXd r = reduced(cost);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (allowed_[j] && r(j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!active_row(i) || t_(i, enter) <= kPivotEps) continue;
        const double ratio = t_(i, rhs()) / t_(i, enter);
        if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row || !active_row(i)) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // After phase one: pivot zero-level artificials out of the basis, or drop
  // their rows when they are redundant.
  void drive_out_artificials(int& pivots) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!active_row(i) || basis_[i] < n_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col >= 0) {
        pivot(i, col);
        ++pivots;
      } else {
        dropped_.push_back(i);
      }
    }
    for (Eigen::Index j = n_; j < n_ + m_; ++j) allowed_[j] = false;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (active_row(i) && basis_[i] < n_) x(basis_[i]) = t_(i, rhs());
    return x;
  }

 private:
  bool active_row(Eigen::Index i) const {
    for (auto d : dropped_)
      if (d == i) return false;
    return true;
  }

  Eigen::Index m_, n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> allowed_;
  std::vector<Eigen::Index> dropped_;
};

}  // namespace

Result solve(const Problem& problem, double feasibility_tol) {
  const auto m = problem.A.rows();
  const auto n = problem.A.cols();
  if (problem.b.size() != m || problem.c.size() != n)
    throw InputError("lp: inconsistent problem dimensions");

  Result result;
  Tableau tab(problem);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.optimize(phase1, result.pivots);  // bounded below by zero
  const double infeasibility = -tab.reduced(phase1)(n + m);
  if (infeasibility > feasibility_tol) {
    result.status = Status::Infeasible;
    return result;
  }

  tab.drive_out_artificials(result.pivots);
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = problem.c;
  if (!tab.optimize(phase2, result.pivots)) {
    result.status = Status::Unbounded;
    return result;
  }
  result.status = Status::Optimal;
  result.x = tab.solution();
  result.objective = problem.c.dot(result.x);
  return result;
}

}  // namespace kms::lp
