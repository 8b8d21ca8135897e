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

#include "dfl/lp.hpp"

#include <chrono>
#include <ostream>

namespace dfl {

std::pair<SolutionVector, SimplexBasis> solve_lp(const LpProblem& problem,
                                                 const std::optional<SimplexBasis>& start_basis,
                                                 int* iterations) {
  const auto start = std::chrono::steady_clock::now();
  Simplex simplex(problem);
  auto result = start_basis ? simplex.solve_from(*start_basis) : simplex.solve();
  if (iterations) *iterations = result.iterations;
  if (result.status == LpStatus::infeasible) {
    throw SolverError(SolverError::Kind::infeasible, "solve_lp: problem is infeasible");
  }
  if (result.status == LpStatus::unbounded) {
    throw SolverError(SolverError::Kind::unbounded, "solve_lp: problem is unbounded");
  }
  SolutionVector sol;
  sol.objective_value = result.objective;
  sol.profile = result.x;
  sol.assignment = std::move(result.x);
  sol.solved_with = "lp-relax";
  sol.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(sol), simplex.basis()};
}

namespace {

void write_term(std::ostream& out, double coeff, Eigen::Index j, bool first) {
  if (coeff < 0) {
    out << (first ? "-" : " - ");
  } else if (!first) {
    out << " + ";
  }
  const double mag = std::abs(coeff);
  if (mag != 1.0) out << mag << ' ';
  out << 'x' << j;
}

void write_linear(std::ostream& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  bool first = true;
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (row[j] == 0.0) continue;
    write_term(out, row[j], j, first);
    first = false;
  }
  if (first) out << "0 x0";
}

}  // namespace

void write_lp_format(std::ostream& out, const LpProblem& problem,
                     const std::vector<bool>& integral_mask) {
  problem.validate();
  const auto precision = out.precision(17);
  out << "\\ written by dflearn\n";
  out << "Minimize\n obj: ";
  write_linear(out, problem.objective.transpose());
  out << "\nSubject To\n";
  for (Eigen::Index i = 0; i < problem.row_count(); ++i) {
    out << " c" << i << ": ";
    write_linear(out, problem.rows.row(i));
    switch (problem.relations[static_cast<std::size_t>(i)]) {
      case Relation::less_equal:
        out << " <= ";
        break;
      case Relation::equal:
        out << " = ";
        break;
      case Relation::greater_equal:
        out << " >= ";
        break;
    }
    out << problem.rhs[i] << '\n';
  }
  out << "Bounds\n";
  for (Eigen::Index j = 0; j < problem.variable_count(); ++j) {
    out << ' ' << problem.lower[j] << " <= x" << j << " <= ";
    if (std::isinf(problem.upper[j])) {
      out << "+inf\n";
    } else {
      out << problem.upper[j] << '\n';
    }
  }
  std::vector<Eigen::Index> binaries;
  std::vector<Eigen::Index> generals;
  for (std::size_t j = 0; j < integral_mask.size(); ++j) {
    if (!integral_mask[j]) continue;
    const auto idx = static_cast<Eigen::Index>(j);
    if (problem.lower[idx] == 0.0 && problem.upper[idx] == 1.0) {
      binaries.push_back(idx);
    } else {
      generals.push_back(idx);
    }
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (auto j : binaries) out << " x" << j << '\n';
  }
  if (!generals.empty()) {
    out << "Generals\n";
    for (auto j : generals) out << " x" << j << '\n';
  }
  out << "End\n";
  out.precision(precision);
}

}  // namespace dfl
