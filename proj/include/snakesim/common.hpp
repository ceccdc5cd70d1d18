// Copyright 2026 The snakesim Authors
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

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace snakesim {

using Eigen::Matrix2Xd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

/// Thrown on malformed inputs: dimension mismatches, invalid parameter
/// values, unparsable or inconsistent configuration.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical operation cannot proceed (ill-conditioned mass
/// matrix, singular KKT system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a solver fails to converge and the caller asked for strict
/// behavior. Carries the step index when raised from a simulation loop.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, long step_index = -1)
      : std::runtime_error(what), step_index(step_index) {}
  long step_index;
};

enum class SolveStatus { kConverged, kMaxIterations, kInfeasible };

/// Cholesky factorization with a positive-definiteness and conditioning
/// check. Throws NumericalError when the matrix is not SPD or its estimated
/// condition number exceeds 1e12.
inline Eigen::LLT<MatrixXd> checked_llt(const MatrixXd& M,
                                        const char* context) {
  Eigen::LLT<MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(context) +
                         ": matrix is not positive definite");
  }
  const double rcond = llt.rcond();
  if (!(rcond > 1e-12)) {
    throw NumericalError(std::string(context) +
                         ": matrix is ill-conditioned (rcond " +
                         std::to_string(rcond) + ")");
  }
  return llt;
}

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIterations:
      return "max-iterations";
    case SolveStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

}  // namespace snakesim
