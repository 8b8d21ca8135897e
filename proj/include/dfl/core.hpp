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

// Shared vocabulary: coefficient vectors, solutions, regret values and the
// error types every oracle and trainer reports through.

#ifndef DFL_CORE_HPP_
#define DFL_CORE_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dfl {

using CoeffVector = Eigen::VectorXd;

enum class Sense { minimize, maximize };
enum class Family { knapsack, lp, milp_scheduling };

std::string to_string(Sense sense);
std::string to_string(Family family);

/// Absolute tolerance for constraint satisfaction.
inline constexpr double kFeasibilityTol = 1e-6;
/// Reduced-cost tolerance used by the simplex pricing step.
inline constexpr double kOptimalityTol = 1e-7;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  enum class Kind { infeasible, unbounded, node_limit, iteration_limit, numerical };

  SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Raised when training diverges or receives non-finite gradients.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// A feasible point together with its objective under the coefficients it was
/// solved for.
///
/// `assignment` lives in the oracle's decision-variable space. `profile` is the
/// image of the assignment in coefficient space, so that the objective is
/// always `coeffs.dot(profile)`. For knapsack both are the same vector; for
/// scheduling the profile is the per-slot energy drawn by the schedule.
struct SolutionVector {
  Eigen::VectorXd assignment;
  Eigen::VectorXd profile;
  double objective_value = 0.0;
  std::string solved_with;
  double solve_seconds = 0.0;
};

struct RegretValue {
  double regret = 0.0;
  std::string eval_oracle;
};

void check_finite(const CoeffVector& coeffs, const char* what);

/// Returns `coeffs` in minimization sense: maximization coefficients are
/// negated, minimization coefficients are returned unchanged.
CoeffVector canonicalize(Sense sense, const CoeffVector& coeffs, Eigen::Index expected_size);

/// +1 for minimize, -1 for maximize. Maps canonical-space gradients back to
/// the sense the predictor is trained in.
inline double sense_sign(Sense sense) { return sense == Sense::minimize ? 1.0 : -1.0; }

}  // namespace dfl

#endif  // DFL_CORE_HPP_
