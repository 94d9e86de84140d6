#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace mmfair::lp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// maximize c'x  subject to  A x <= b,  x >= 0.  Entries of b may be negative.
template <typename Scalar>
struct Problem {
  Matrix<Scalar> A;
  Vector<Scalar> b;
  Vector<Scalar> c;

  Problem(Eigen::Index rows, Eigen::Index cols)
      : A(Matrix<Scalar>::Zero(rows, cols)), b(Vector<Scalar>::Zero(rows)), c(Vector<Scalar>::Zero(cols)) {}
};

enum class Status { optimal, infeasible, unbounded };

template <typename Scalar>
struct Solution {
  Status status = Status::infeasible;
  Vector<Scalar> x;
  Scalar objective = Scalar(0);
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  Tableau(const Problem<Scalar>& problem, Scalar tol) : tol_(tol) {
    const Eigen::Index m = problem.A.rows();
    const Eigen::Index n = problem.A.cols();
    n_ = n;
    m_ = m;
    Eigen::Index artificials = 0;
    for (Eigen::Index i = 0; i < m; ++i) artificials += problem.b(i) < Scalar(0) ? 1 : 0;
    art_begin_ = n + m;
    cols_ = n + m + artificials;
    t_ = Matrix<Scalar>::Zero(m + 1, cols_ + 1);
    basis_.resize(static_cast<std::size_t>(m));

    Eigen::Index next_art = art_begin_;
    for (Eigen::Index i = 0; i < m; ++i) {
      // Row equilibration keeps pivot tolerances meaningful when the
      // coefficients span several orders of magnitude.
      Scalar scale = problem.A.row(i).cwiseAbs().maxCoeff();
      if (!(scale > Scalar(0))) scale = Scalar(1);
      const Scalar sign = problem.b(i) < Scalar(0) ? Scalar(-1) : Scalar(1);
      t_.row(i).head(n) = sign * problem.A.row(i) / scale;
      t_(i, n + i) = sign;
      t_(i, cols_) = sign * problem.b(i) / scale;
      if (sign < Scalar(0)) {
        t_(i, next_art) = Scalar(1);
        basis_[static_cast<std::size_t>(i)] = next_art++;
      } else {
        basis_[static_cast<std::size_t>(i)] = n + i;
      }
    }
  }

  Status solve(const Vector<Scalar>& c) {
    const Eigen::Index obj = m_;
    if (cols_ > art_begin_) {
      t_.row(obj).setZero();
      for (Eigen::Index j = art_begin_; j < cols_; ++j) t_(obj, j) = Scalar(1);
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (basis_[static_cast<std::size_t>(i)] >= art_begin_) t_.row(obj) -= t_.row(i);
      }
      if (optimize(cols_) == Status::unbounded) return Status::infeasible;
      if (t_(obj, cols_) < -feasibility_tol()) return Status::infeasible;
      drive_out_artificials();
    }
    t_.row(obj).setZero();
    t_.row(obj).head(n_) = -c.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index bcol = basis_[static_cast<std::size_t>(i)];
      const Scalar coef = t_(obj, bcol);
      if (coef != Scalar(0)) t_.row(obj) -= coef * t_.row(i);
    }
    return optimize(art_begin_);
  }

  Vector<Scalar> primal() const {
    Vector<Scalar> x = Vector<Scalar>::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index bcol = basis_[static_cast<std::size_t>(i)];
      if (bcol < n_) x(bcol) = t_(i, cols_);
    }
    return x;
  }

 private:
  Scalar feasibility_tol() const { return Scalar(1e3) * tol_; }

  // Bland's rule; only columns below `limit` may enter.
  Status optimize(Eigen::Index limit) {
    const Eigen::Index obj = m_;
    for (std::size_t guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (t_(obj, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::optimal;
      Eigen::Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (t_(i, enter) > tol_) {
          const Scalar ratio = t_(i, cols_) / t_(i, enter);
          if (ratio < best - tol_ ||
              (std::abs(ratio - best) <= tol_ && leave >= 0 &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
    }
    return Status::unbounded;
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const Scalar factor = t_(i, col);
      if (factor != Scalar(0)) t_.row(i) -= factor * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
      for (Eigen::Index j = 0; j < art_begin_; ++j) {
        if (std::abs(t_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  Scalar tol_;
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  Eigen::Index cols_ = 0;
  Eigen::Index art_begin_ = 0;
  Matrix<Scalar> t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Dense two-phase simplex with Bland's anti-cycling rule. Meant for the
/// small programs that appear here (tens of rows and columns).
template <typename Scalar>
Solution<Scalar> solve(const Problem<Scalar>& problem, Scalar tol = Scalar(1e-10)) {
  detail::Tableau<Scalar> tableau(problem, tol);
  Solution<Scalar> out;
  out.status = tableau.solve(problem.c);
  if (out.status == Status::optimal) {
    out.x = tableau.primal();
    out.objective = problem.c.dot(out.x);
  }
  return out;
}

}  // namespace mmfair::lp
