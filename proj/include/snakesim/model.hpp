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

#include <vector>

#include "snakesim/common.hpp"

namespace snakesim {

/// One rigid link of the planar chain. Distances are measured from the
/// proximal joint along the link axis; all quantities in SI units.
struct LinkSpec {
  double mass = 0.0;                // kg
  double length = 0.0;              // m
  double inertia_about_com = 0.0;   // kg m^2
  double com_offset = 0.0;          // m
  double sphere_radius = 0.0;       // m, virtual convex encapsulation
  double sphere_center_offset = 0.0;  // m
};

/// Planar serial chain with a floating base (x, z, pitch) and one revolute
/// joint between consecutive links. Coordinates:
///   q = [base_x, base_z, base_pitch, joint_0, ..., joint_{n_joints-1}]
/// where joint angles are relative, proximal to distal.
///
/// The base point is the proximal end of link 0; the head is the distal tip
/// of the last link.
struct RobotModel {
  std::vector<LinkSpec> links;
  Vector2d gravity{0.0, -9.81};  // m/s^2

  // Frame at which external point wrenches w = [fx, fz, tau] are applied.
  // Defaults to the head tip (resolved by validate() when left negative).
  int wrench_link = -1;
  double wrench_point_offset = -1.0;

  int num_links() const { return static_cast<int>(links.size()); }
  int num_joints() const { return num_links() - 1; }
  int nq() const { return num_joints() + 3; }

  /// Checks all model invariants; throws InvalidInput with a description of
  /// the first violation. Resolves the default wrench frame.
  void validate();
};

/// Generalized position/velocity at a time instant.
struct State {
  VectorXd q;
  VectorXd v;
  double t = 0.0;
};

/// Per-sphere contact candidate against the flat ground z = 0.
///
/// The contact point is the lowest point of the sphere; the Jacobian maps
/// generalized velocity to the velocity of that geometric point (row 0
/// tangential/x, row 1 normal/z), consistent with the point-mass-in-sphere
/// reduced model: ground friction exerts no spin torque about the sphere
/// center.
struct ContactPoint {
  int link_index = -1;
  Vector2d position = Vector2d::Zero();  // lowest point of the sphere, m
  double gap = 0.0;                      // signed distance to ground, m
  Vector2d normal{0.0, 1.0};
  Matrix2Xd jacobian;            // 2 x nq
  double normal_velocity = 0.0;  // m/s, n^T J v
  double tangential_velocity = 0.0;
};

using ContactSet = std::vector<ContactPoint>;

/// Configuration-dependent mass matrix, symmetric positive definite.
MatrixXd mass_matrix(const RobotModel& model, const VectorXd& q);

/// Bias forces h(q, v): Coriolis, centrifugal and gravity terms, appearing
/// on the left-hand side as M(q) qdd + h(q, v) = generalized forces.
VectorXd bias_forces(const RobotModel& model, const VectorXd& q,
                     const VectorXd& v);

/// One ContactPoint per contact sphere, gaps and Jacobians populated.
ContactSet contact_candidates(const RobotModel& model, const VectorXd& q,
                              const VectorXd& v);

/// Joint-torque selection matrix S (nq x n_joints). Base rows are zero.
MatrixXd actuation_matrix(const RobotModel& model);

/// External wrench map W(q) (nq x 3) for a point wrench [fx, fz, tau]
/// applied at the model's wrench frame.
MatrixXd wrench_map(const RobotModel& model, const VectorXd& q);

/// S u + W(q) w. Pass a zero or empty w when no external wrench acts.
VectorXd actuation_and_wrench(const RobotModel& model, const VectorXd& q,
                              const VectorXd& u, const Vector3d& w);

// Kinematics helpers.

/// World position of a point on a link, `offset` meters from its proximal
/// joint along the link axis.
Vector2d point_on_link(const RobotModel& model, const VectorXd& q, int link,
                       double offset);

/// Jacobian of point_on_link with respect to q (2 x nq).
Matrix2Xd point_jacobian(const RobotModel& model, const VectorXd& q, int link,
                         double offset);

/// Absolute link angles (pitch plus accumulated joint angles).
VectorXd link_angles(const RobotModel& model, const VectorXd& q);

/// Distal tip of the last link.
Vector2d head_position(const RobotModel& model, const VectorXd& q);

double kinetic_energy(const RobotModel& model, const VectorXd& q,
                      const VectorXd& v);
double potential_energy(const RobotModel& model, const VectorXd& q);
double mechanical_energy(const RobotModel& model, const State& state);

}  // namespace snakesim
