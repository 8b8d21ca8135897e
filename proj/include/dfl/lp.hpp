// Copyright 2026 The dflearn Authors.
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

// Dense-tableau bounded primal simplex.
//
// Problems are stated as
//
//     minimize  c'x   s.t.  rows x (<=,=,>=) rhs,  lower <= x <= upper
//
// with finite lower bounds. Internally every row receives one logical column
// (slack, surplus or a fixed zero for equalities); artificial columns exist
// only during phase 1 of a cold start. Upper bounds are handled implicitly by
// bound flipping, so [0,1] relaxed binaries add no rows.

#ifndef DFL_LP_HPP_
#define DFL_LP_HPP_

#include "dfl/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace dfl {

enum class Relation { less_equal, equal, greater_equal };

template <typename Scalar>
struct BasicLpProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Vector objective;
  Matrix rows;
  std::vector<Relation> relations;
  Vector rhs;
  Vector lower;
  Vector upper;

  BasicLpProblem() = default;

  /// `variable_count` variables with bounds [0, 1] and a zero objective.
  explicit BasicLpProblem(Eigen::Index variable_count)
      : objective(Vector::Zero(variable_count)),
        rows(0, variable_count),
        rhs(0),
        lower(Vector::Zero(variable_count)),
        upper(Vector::Ones(variable_count)) {}

  Eigen::Index variable_count() const { return objective.size(); }
  Eigen::Index row_count() const { return rows.rows(); }

  void add_row(const Eigen::Ref<const Vector>& coeffs, Relation relation, Scalar value) {
    if (coeffs.size() != variable_count()) {
      throw DimensionError("add_row: row has " + std::to_string(coeffs.size()) +
                           " coefficients, problem has " + std::to_string(variable_count()) +
                           " variables");
    }
    const Eigen::Index m = rows.rows();
    rows.conservativeResize(m + 1, Eigen::NoChange);
    rows.row(m) = coeffs.transpose();
    rhs.conservativeResize(m + 1);
    rhs[m] = value;
    relations.push_back(relation);
  }

  void validate() const {
    const Eigen::Index n = variable_count();
    if (rows.cols() != n || lower.size() != n || upper.size() != n) {
      throw DimensionError("lp: inconsistent variable dimensions");
    }
    if (rhs.size() != rows.rows() || static_cast<Eigen::Index>(relations.size()) != rows.rows()) {
      throw DimensionError("lp: inconsistent row dimensions");
    }
    if (!objective.allFinite() || !rows.allFinite() || !rhs.allFinite() || !lower.allFinite()) {
      throw ModelError("lp: non-finite data");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isnan(static_cast<double>(upper[j])) || lower[j] > upper[j]) {
        throw ModelError("lp: variable " + std::to_string(j) + " has lower > upper");
      }
    }
  }
};

using LpProblem = BasicLpProblem<double>;

/// Column indices of a simplex basis. Indices in [0, n) are structural
/// variables, index n + i is the logical column of row i. `at_upper` lists
/// nonbasic columns resting at their upper bound.
struct SimplexBasis {
  std::vector<int> basic;
  std::vector<int> at_upper;

  friend bool operator==(const SimplexBasis&, const SimplexBasis&) = default;
};

enum class LpStatus { optimal, infeasible, unbounded };

template <typename Scalar>
struct BasicLpResult {
  LpStatus status = LpStatus::infeasible;
  typename BasicLpProblem<Scalar>::Vector x;
  Scalar objective = 0;
  int iterations = 0;
};

template <typename Scalar>
class BasicSimplex {
 public:
  using Problem = BasicLpProblem<Scalar>;
  using Vector = typename Problem::Vector;
  using Matrix = typename Problem::Matrix;
  using Result = BasicLpResult<Scalar>;

  static constexpr int kBlandThreshold = 50;

  explicit BasicSimplex(Problem problem) : problem_(std::move(problem)) {
    problem_.validate();
    n_ = problem_.variable_count();
    m_ = problem_.row_count();
    normalize();
  }

  const Problem& problem() const { return problem_; }

  /// Solves with the current objective; resumes from the held basis if any.
  Result solve() {
    if (!has_basis_) return cold_solve();
    return warm_solve();
  }

  /// Replaces the objective and re-solves. Constraints are unchanged, so the
  /// held basis stays primal feasible and only phase 2 runs.
  Result solve(const Vector& objective) {
    set_objective(objective);
    return solve();
  }

  /// Installs `basis` (refactoring the tableau) and re-solves from it. Falls
  /// back to a cold start if the basis is singular or not primal feasible.
  Result solve_from(const SimplexBasis& basis) {
    if (!install(basis)) {
      has_basis_ = false;
      return cold_solve();
    }
    return warm_solve();
  }

  void set_objective(const Vector& objective) {
    if (objective.size() != n_) throw DimensionError("simplex: objective size mismatch");
    if (!objective.allFinite()) throw DimensionError("simplex: non-finite objective");
    problem_.objective = objective;
  }

  /// Drops the held basis so the next solve starts cold.
  void reset() { has_basis_ = false; }
  bool has_basis() const { return has_basis_; }

  SimplexBasis basis() const {
    SimplexBasis out;
    if (!has_basis_) return out;
    out.basic.assign(basic_.begin(), basic_.end());
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::at_upper) out.at_upper.push_back(static_cast<int>(j));
    }
    return out;
  }

  long total_iterations() const { return total_iterations_; }

 private:
  enum class Status : unsigned char { basic, at_lower, at_upper };
  enum class Outcome { optimal, unbounded };

  static Scalar inf() { return std::numeric_limits<Scalar>::infinity(); }
  static Scalar pivot_tol() { return Scalar(1e-9); }
  static Scalar cost_tol() { return Scalar(kOptimalityTol); }
  static Scalar feas_tol() { return Scalar(kFeasibilityTol); }

  // Shifts lower bounds to zero and flips rows so the shifted rhs is
  // nonnegative. Builds the m x (n+m) matrix including logical columns.
  void normalize() {
    const Index cols = n_ + m_;
    shift_ = problem_.lower;
    ub_ = Vector(cols);
    for (Index j = 0; j < n_; ++j) ub_[j] = problem_.upper[j] - problem_.lower[j];
    a_ = Matrix::Zero(m_, cols);
    b_ = Vector(m_);
    relation_ = problem_.relations;
    for (Index i = 0; i < m_; ++i) {
      Scalar rhs = problem_.rhs[i] - problem_.rows.row(i).dot(shift_);
      a_.row(i).head(n_) = problem_.rows.row(i);
      if (rhs < 0) {
        rhs = -rhs;
        a_.row(i).head(n_) *= Scalar(-1);
        if (relation_[i] == Relation::less_equal) {
          relation_[i] = Relation::greater_equal;
        } else if (relation_[i] == Relation::greater_equal) {
          relation_[i] = Relation::less_equal;
        }
      }
      b_[i] = rhs;
      switch (relation_[i]) {
        case Relation::less_equal:
          a_(i, n_ + i) = Scalar(1);
          ub_[n_ + i] = inf();
          break;
        case Relation::greater_equal:
          a_(i, n_ + i) = Scalar(-1);
          ub_[n_ + i] = inf();
          break;
        case Relation::equal:
          a_(i, n_ + i) = Scalar(1);
          ub_[n_ + i] = Scalar(0);
          break;
      }
    }
    b_scale_ = Scalar(1) + (m_ > 0 ? b_.cwiseAbs().maxCoeff() : Scalar(0));
  }

  using Index = Eigen::Index;

  Result cold_solve() {
    const Index cols = n_ + m_;
    iterations_ = 0;
    // Rows whose logical cannot start basic at a feasible value get an
    // artificial column.
    std::vector<Index> art_rows;
    for (Index i = 0; i < m_; ++i) {
      const bool logical_ok = relation_[i] == Relation::less_equal || b_[i] == Scalar(0);
      if (!logical_ok) art_rows.push_back(i);
    }
    const Index k = static_cast<Index>(art_rows.size());
    t_ = Matrix::Zero(m_, cols + k);
    t_.leftCols(cols) = a_;
    status_.assign(static_cast<std::size_t>(cols + k), Status::at_lower);
    basic_.assign(static_cast<std::size_t>(m_), -1);
    beta_ = b_;
    ub_.conservativeResize(cols + k);
    for (Index a = 0; a < k; ++a) {
      const Index i = art_rows[a];
      t_(i, cols + a) = Scalar(1);
      ub_[cols + a] = inf();
      basic_[i] = static_cast<int>(cols + a);
      status_[cols + a] = Status::basic;
    }
    for (Index i = 0; i < m_; ++i) {
      if (basic_[i] >= 0) continue;
      basic_[i] = static_cast<int>(n_ + i);
      status_[n_ + i] = Status::basic;
      if (a_(i, n_ + i) < 0) t_.row(i) *= Scalar(-1);  // surplus with b = 0
    }

    if (k > 0) {
      cost_ = Vector::Zero(cols + k);
      cost_.tail(k).setOnes();
      price_all();
      run();  // phase 1 is bounded below by zero
      Scalar infeas = 0;
      for (Index i = 0; i < m_; ++i) {
        if (basic_[i] >= cols) infeas += beta_[i];
      }
      if (infeas > feas_tol() * b_scale_) {
        has_basis_ = false;
        ub_.conservativeResize(cols);
        Result r;
        r.status = LpStatus::infeasible;
        r.iterations = iterations_;
        return r;
      }
      drive_out_artificials(art_rows);
      t_.conservativeResize(Eigen::NoChange, cols);
      status_.resize(static_cast<std::size_t>(cols));
      ub_.conservativeResize(cols);
    }
    has_basis_ = true;
    pivots_since_refactor_ = iterations_;
    return phase_two();
  }

  Result warm_solve() {
    iterations_ = 0;
    return phase_two();
  }

  Result phase_two() {
    set_phase_two_cost();
    price_all();
    Outcome outcome = run();
    if (outcome == Outcome::optimal && !accurate()) {
      if (!refactor() || !accurate()) {
        if (recovering_) {
          throw SolverError(SolverError::Kind::numerical, "simplex: lost accuracy after restart");
        }
        has_basis_ = false;
        recovering_ = true;
        Result r = cold_solve();
        recovering_ = false;
        return r;
      }
      price_all();
      outcome = run();
    }
    if (outcome == Outcome::unbounded) {
      has_basis_ = false;
      Result r;
      r.status = LpStatus::unbounded;
      r.iterations = iterations_;
      return r;
    }
    if (pivots_since_refactor_ > kRefactorInterval) refactor();
    Result r;
    r.status = LpStatus::optimal;
    r.x = primal();
    r.objective = problem_.objective.dot(r.x);
    r.iterations = iterations_;
    return r;
  }

  void set_phase_two_cost() {
    cost_ = Vector::Zero(n_ + m_);
    cost_.head(n_) = problem_.objective;
  }

  void price_all() {
    Vector cb(m_);
    for (Index i = 0; i < m_; ++i) cb[i] = cost_[basic_[i]];
    d_ = cost_ - t_.transpose() * cb;
  }

  // Primal simplex iterations on the current tableau and cost.
  Outcome run() {
    const Index cols = t_.cols();
    const long limit = 50L * (m_ + cols) + 1000;
    int degenerate_run = 0;
    bool bland = false;
    for (;;) {
      // Pricing.
      Index q = -1;
      Scalar best = 0;
      for (Index j = 0; j < cols; ++j) {
        const Status s = status_[j];
        if (s == Status::basic || ub_[j] == Scalar(0)) continue;
        const Scalar dj = d_[j];
        const bool eligible = (s == Status::at_lower) ? dj < -cost_tol() : dj > cost_tol();
        if (!eligible) continue;
        if (bland) {
          q = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
        }
      }
      if (q < 0) return Outcome::optimal;
      if (++iterations_ > limit) {
        throw SolverError(SolverError::Kind::iteration_limit, "simplex: iteration limit reached");
      }
      ++total_iterations_;
      ++pivots_since_refactor_;

      // Ratio test.
      const Scalar dir = status_[q] == Status::at_lower ? Scalar(1) : Scalar(-1);
      Scalar theta = ub_[q];
      Index leave = -1;
      bool leave_to_upper = false;
      Scalar leave_alpha = 0;
      for (Index i = 0; i < m_; ++i) {
        const Scalar alpha = dir * t_(i, q);
        Scalar ratio;
        bool to_upper;
        if (alpha > pivot_tol()) {
          ratio = std::max(beta_[i], Scalar(0)) / alpha;
          to_upper = false;
        } else if (alpha < -pivot_tol() && ub_[basic_[i]] < inf()) {
          ratio = std::max(ub_[basic_[i]] - beta_[i], Scalar(0)) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        const Scalar slack = Scalar(1e-12) * (Scalar(1) + ratio);
        bool take;
        if (ratio < theta - slack) {
          take = true;
        } else if (leave >= 0 && ratio <= theta + slack) {
          take = bland ? basic_[i] < basic_[leave] : std::abs(alpha) > std::abs(leave_alpha);
        } else {
          take = false;
        }
        if (take) {
          theta = std::min(ratio, theta);
          leave = i;
          leave_to_upper = to_upper;
          leave_alpha = alpha;
        }
      }
      if (leave < 0 && !(theta < inf())) return Outcome::unbounded;

      if (theta <= Scalar(1e-12)) {
        if (++degenerate_run >= kBlandThreshold) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      if (theta > 0) beta_.noalias() -= (dir * theta) * t_.col(q);
      if (leave < 0) {
        status_[q] = status_[q] == Status::at_lower ? Status::at_upper : Status::at_lower;
        continue;
      }
      const Scalar entering_value = dir > 0 ? theta : ub_[q] - theta;
      const Index out = basic_[leave];
      status_[out] = leave_to_upper ? Status::at_upper : Status::at_lower;
      if (out >= n_ + m_) ub_[out] = Scalar(0);  // artificials never re-enter
      basic_[leave] = static_cast<int>(q);
      status_[q] = Status::basic;
      beta_[leave] = entering_value;
      pivot(leave, q);
    }
  }

  void pivot(Index r, Index q) {
    const Scalar p = t_(r, q);
    t_.row(r) /= p;
    t_(r, q) = Scalar(1);
    for (Index i = 0; i < m_; ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, q);
      if (f == Scalar(0)) continue;
      t_.row(i) -= f * t_.row(r);
      t_(i, q) = Scalar(0);
    }
    const Scalar dq = d_[q];
    if (dq != Scalar(0)) {
      d_ -= dq * t_.row(r).transpose();
      d_[q] = Scalar(0);
    }
  }

  // After a feasible phase 1 every basic artificial sits at zero. The logical
  // of the artificial's own row has a unit entry in that tableau row, so it
  // can always replace it with a degenerate pivot.
  void drive_out_artificials(const std::vector<Index>& art_rows) {
    const Index cols = n_ + m_;
    for (Index r = 0; r < m_; ++r) {
      const Index art = basic_[r];
      if (art < cols) continue;
      Index q = -1;
      Scalar best = pivot_tol();
      for (Index j = 0; j < n_; ++j) {
        if (status_[j] != Status::basic && std::abs(t_(r, j)) > best) {
          best = std::abs(t_(r, j));
          q = j;
        }
      }
      if (q < 0) q = n_ + art_rows[art - cols];
      const Scalar value = status_[q] == Status::at_upper ? ub_[q] : Scalar(0);
      status_[art] = Status::at_lower;
      ub_[art] = Scalar(0);
      basic_[r] = static_cast<int>(q);
      status_[q] = Status::basic;
      beta_[r] = value;
      pivot(r, q);
    }
  }

  Vector shifted_primal() const {
    Vector xs = Vector::Zero(n_ + m_);
    for (Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::at_upper) xs[j] = ub_[j];
    }
    for (Index i = 0; i < m_; ++i) xs[basic_[i]] = beta_[i];
    return xs;
  }

  Vector primal() const {
    Vector xs = shifted_primal();
    Vector x = xs.head(n_) + shift_;
    for (Index j = 0; j < n_; ++j) {
      x[j] = std::clamp(x[j], problem_.lower[j], problem_.upper[j]);
    }
    return x;
  }

  bool accurate() const {
    if (m_ == 0) return true;
    const Vector xs = shifted_primal();
    const Scalar residual = (a_ * xs - b_).cwiseAbs().maxCoeff();
    if (residual > Scalar(1e-9) * b_scale_) return false;
    for (Index i = 0; i < m_; ++i) {
      if (beta_[i] < -feas_tol() || beta_[i] > ub_[basic_[i]] + feas_tol()) return false;
    }
    return true;
  }

  // Rebuilds the tableau and basic values from the original matrix for the
  // current basis.
  bool refactor() {
    Matrix basis_matrix(m_, m_);
    for (Index i = 0; i < m_; ++i) basis_matrix.col(i) = a_.col(basic_[i]);
    Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(basis_matrix);
    const Scalar det = lu.determinant();
    if (!(std::abs(det) > Scalar(0)) || !std::isfinite(static_cast<double>(det))) return false;
    Vector rhs = b_;
    for (Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == Status::at_upper) rhs -= ub_[j] * a_.col(j);
    }
    t_ = lu.solve(a_);
    beta_ = lu.solve(rhs);
    for (Index i = 0; i < m_; ++i) {
      for (Index j = 0; j < t_.cols(); ++j) {
        if (std::abs(t_(i, j)) < Scalar(1e-13)) t_(i, j) = Scalar(0);
      }
    }
    pivots_since_refactor_ = 0;
    return true;
  }

  bool install(const SimplexBasis& basis) {
    const Index cols = n_ + m_;
    if (static_cast<Index>(basis.basic.size()) != m_) return false;
    std::vector<Status> status(static_cast<std::size_t>(cols), Status::at_lower);
    for (int j : basis.basic) {
      if (j < 0 || j >= cols || status[j] == Status::basic) return false;
      status[j] = Status::basic;
    }
    for (int j : basis.at_upper) {
      if (j < 0 || j >= cols || status[j] == Status::basic || !(ub_[j] < inf())) return false;
      status[j] = Status::at_upper;
    }
    status_ = std::move(status);
    basic_ = basis.basic;
    ub_.conservativeResize(cols);
    if (!refactor()) return false;
    if (!accurate()) return false;
    has_basis_ = true;
    return true;
  }

  static constexpr long kRefactorInterval = 2000;

  Problem problem_;
  Index n_ = 0;
  Index m_ = 0;

  Matrix a_;
  Vector b_;
  Vector ub_;
  Vector shift_;
  Scalar b_scale_ = 1;
  std::vector<Relation> relation_;

  Matrix t_;
  Vector beta_;
  Vector cost_;
  Vector d_;
  std::vector<int> basic_;
  std::vector<Status> status_;
  bool has_basis_ = false;
  bool recovering_ = false;
  int iterations_ = 0;
  long total_iterations_ = 0;
  long pivots_since_refactor_ = 0;
};

using Simplex = BasicSimplex<double>;

/// One-shot LP solve. Throws SolverError on infeasible or unbounded problems.
/// When `start_basis` is given and primal feasible, solving resumes from it.
std::pair<SolutionVector, SimplexBasis> solve_lp(const LpProblem& problem,
                                                 const std::optional<SimplexBasis>& start_basis = {},
                                                 int* iterations = nullptr);

/// Writes `problem` in CPLEX LP text format. Variables flagged in
/// `integral_mask` are listed under a Binaries or Generals section.
void write_lp_format(std::ostream& out, const LpProblem& problem,
                     const std::vector<bool>& integral_mask = {});

}  // namespace dfl

#endif  // DFL_LP_HPP_
