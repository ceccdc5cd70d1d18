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

#include <string>
#include <utility>
#include <vector>

#include "snakesim/common.hpp"
#include "snakesim/model.hpp"

namespace snakesim {

/// One active contact in a per-step impulse problem.
struct ContactInstance {
  int link_index = -1;
  double gap = 0.0;       // signed gap at the beginning of the step, m
  Vector2d normal{0.0, 1.0};
  Matrix2Xd jacobian;     // 2 x nq, row 0 tangential, row 1 normal
  double mu = 0.5;
  double restitution = 0.0;
  double approach_velocity = 0.0;  // n^T J v_n before the step, m/s
};

/// Velocity-level cone complementarity problem for one time step.
///
/// Decision variables are impulses (N s). The post-impulse velocity is
///   v_next = vtilde + M^{-1} sum_i J_i^T [f_t_i, f_n_i]^T
/// and the discrete gap update g_i = gap_i + dt n_i^T J_i v_next must satisfy
/// g_i >= 0, f_n_i >= 0, g_i f_n_i = 0 together with the friction cone
/// |f_t_i| <= mu_i f_n_i.
struct ContactProblem {
  MatrixXd M;        // mass matrix at the step's configuration
  VectorXd vtilde;   // free velocity (no contact forces)
  double dt = 1e-3;
  std::vector<ContactInstance> contacts;

  int nq() const { return static_cast<int>(vtilde.size()); }
  int num_contacts() const { return static_cast<int>(contacts.size()); }
};

struct SolverSettings {
  int max_iterations = 200;       // Gauss-Seidel sweeps
  double tolerance = 1e-10;       // natural-map residual, impulse units
  double complementarity_tolerance = 1e-8;  // times the force scale
  double penetration_tolerance = 1e-6;      // m
  double cone_tolerance = 1e-10;
};

/// Contact impulses plus the diagnostics needed to audit a step.
struct ImpulseSolution {
  VectorXd normal_impulse;      // N s, one per contact, >= 0
  VectorXd tangential_impulse;  // N s
  VectorXd v_next;
  VectorXd gaps_next;           // discrete gap update per contact, m
  SolveStatus status = SolveStatus::kConverged;
  int iterations = 0;
  std::vector<double> residual_history;  // best-so-far per sweep

  struct Residuals {
    double complementarity = 0.0;  // max |g_i f_n_i|
    double cone = 0.0;             // max(0, |f_t| - mu f_n)
    double dynamics = 0.0;         // ||M (v - vtilde) - J^T lambda||_inf
    double penetration = 0.0;      // max(0, -min g_i)
    double natural_map = 0.0;      // fixed-point residual
  } residuals;

  double force_scale = 1.0;  // max(1, ||f_n||_inf), scales complementarity tol
};

/// Solves the cone complementarity problem by projected Gauss-Seidel
/// iteration over contacts with best-iterate tracking. Never returns a
/// silently-wrong answer: on failure status is kMaxIterations and the best
/// iterate plus residuals are reported.
ImpulseSolution solve_impulses(const ContactProblem& problem,
                               const SolverSettings& settings = {});

/// Euclidean projection onto the planar friction cone
/// {(fn, ft) : fn >= 0, |ft| <= mu fn}. Inputs in the polar cone map to the
/// origin.
std::pair<double, double> project_friction_cone(double fn, double ft,
                                                double mu);

/// JSON archive of a ContactProblem (matrices row-major, dimensions
/// explicit) so failing instances can be replayed by the debug CLI.
std::string problem_to_json(const ContactProblem& problem);
ContactProblem problem_from_json(const std::string& text);

}  // namespace snakesim
