// Copyright 2026 The brwalk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BRWALK_LP_H_
#define BRWALK_LP_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace brwalk {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

// maximize c'x  subject to  A x (sense) rhs,  x >= 0.
template <typename Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Matrix A;
  Vector rhs;
  Vector c;
  std::vector<RowSense> sense;
};

template <typename Scalar>
struct LpResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  LpStatus status = LpStatus::kIterationLimit;
  Scalar value = Scalar(0);
  Vector x;  // primal solution
  Vector y;  // row duals, y >= 0 on <= rows, y <= 0 on >= rows
  int iterations = 0;
};

// Residuals of a candidate primal/dual pair, all in absolute terms.
template <typename Scalar>
struct LpResiduals {
  Scalar primal = Scalar(0);  // max row violation and negativity of x
  Scalar dual = Scalar(0);    // max positive reduced cost and dual sign error
  Scalar gap = Scalar(0);     // |c'x - rhs'y|
};

template <typename Scalar>
LpResiduals<Scalar> lp_residuals(const LinearProgram<Scalar>& lp,
                                 const LpResult<Scalar>& sol) {
  using std::abs;
  using std::max;
  LpResiduals<Scalar> r;
  const auto row = (lp.A * sol.x - lp.rhs).eval();
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    Scalar violation = abs(row[i]);
    if (lp.sense[i] == RowSense::kLessEqual) violation = max(Scalar(0), row[i]);
    if (lp.sense[i] == RowSense::kGreaterEqual) violation = max(Scalar(0), -row[i]);
    r.primal = max(r.primal, violation);
    if (lp.sense[i] == RowSense::kLessEqual) r.dual = max(r.dual, -sol.y[i]);
    if (lp.sense[i] == RowSense::kGreaterEqual) r.dual = max(r.dual, sol.y[i]);
  }
  for (Eigen::Index j = 0; j < sol.x.size(); ++j) {
    r.primal = max(r.primal, -sol.x[j]);
  }
  const auto reduced = (lp.c - lp.A.transpose() * sol.y).eval();
  for (Eigen::Index j = 0; j < reduced.size(); ++j) {
    r.dual = max(r.dual, reduced[j]);
  }
  r.gap = abs(lp.c.dot(sol.x) - lp.rhs.dot(sol.y));
  return r;
}

// Dense two-phase primal simplex with Bland's rule. Meant for programs with a
// handful of rows; the tableau is stored in full.
template <typename Scalar>
class DenseSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit DenseSimplex(int max_iterations = 100000,
                        Scalar tolerance = Scalar(1000) *
                                           std::numeric_limits<Scalar>::epsilon())
      : max_iterations_(max_iterations), tol_(tolerance) {}

  LpResult<Scalar> solve(const LinearProgram<Scalar>& lp) {
    const Eigen::Index m = lp.A.rows();
    const Eigen::Index n = lp.A.cols();
    Eigen::Index num_slack = 0;
    for (RowSense s : lp.sense) num_slack += (s != RowSense::kEqual);
    const Eigen::Index art0 = n + num_slack;  // first artificial column
    const Eigen::Index cols = art0 + m;
    const Eigen::Index rhs = cols;

    T_ = Matrix::Zero(m + 1, cols + 1);
    sign_.assign(m, Scalar(1));
    basis_.assign(m, 0);
    Eigen::Index slack = n;
    for (Eigen::Index i = 0; i < m; ++i) {
      T_.row(i).head(n) = lp.A.row(i);
      if (lp.sense[i] == RowSense::kLessEqual) T_(i, slack++) = Scalar(1);
      if (lp.sense[i] == RowSense::kGreaterEqual) T_(i, slack++) = Scalar(-1);
      T_(i, rhs) = lp.rhs[i];
      if (lp.rhs[i] < Scalar(0)) {
        sign_[i] = Scalar(-1);
        T_.row(i) *= Scalar(-1);
      }
      T_(i, art0 + i) = Scalar(1);
      basis_[i] = art0 + i;
    }

    LpResult<Scalar> result;
    // Phase one: maximize -sum(artificials).
    Vector cost1 = Vector::Zero(cols);
    cost1.tail(m).setConstant(Scalar(-1));
    price(cost1);
    LpStatus status = iterate(cols, result.iterations);
    if (status != LpStatus::kOptimal) {
      result.status = status;
      return result;
    }
    using std::abs;
    if (abs(T_(m, rhs)) > tol_ * std::max<Scalar>(Scalar(1), lp.rhs.cwiseAbs().maxCoeff())) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    drive_out_artificials(art0);

    // Phase two on the original objective; artificials may no longer enter.
    Vector cost2 = Vector::Zero(cols);
    cost2.head(n) = lp.c;
    price(cost2);
    status = iterate(art0, result.iterations);
    result.status = status;
    if (status != LpStatus::kOptimal) return result;

    result.x = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis_[i] < n) result.x[basis_[i]] = T_(i, rhs);
    }
    result.y.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      result.y[i] = sign_[i] * T_(m, art0 + i);
    }
    result.value = lp.c.dot(result.x);
    return result;
  }

 private:
  // Rebuilds the reduced-cost row for the given cost vector and basis.
  void price(const Vector& cost) {
    const Eigen::Index m = T_.rows() - 1;
    T_.row(m).setZero();
    T_.row(m).head(cost.size()) = -cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar cb = cost[basis_[i]];
      if (cb != Scalar(0)) T_.row(m) += cb * T_.row(i);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    T_.row(row) /= T_(row, col);
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (i != row && T_(i, col) != Scalar(0)) {
        T_.row(i) -= T_(i, col) * T_.row(row);
      }
    }
    basis_[row] = col;
  }

  LpStatus iterate(Eigen::Index allowed_cols, int& iterations) {
    const Eigen::Index m = T_.rows() - 1;
    const Eigen::Index rhs = T_.cols() - 1;
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (T_(m, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      if (++iterations > max_iterations_) return LpStatus::kIterationLimit;
      Eigen::Index leave = -1;
      Scalar best_ratio(0);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T_(i, enter) <= tol_) continue;
        const Scalar ratio = T_(i, rhs) / T_(i, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
  }

  void drive_out_artificials(Eigen::Index art0) {
    using std::abs;
    const Eigen::Index m = T_.rows() - 1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (basis_[i] < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (abs(T_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  int max_iterations_;
  Scalar tol_;
  Matrix T_;
  std::vector<Scalar> sign_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace brwalk

#endif  // BRWALK_LP_H_
