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

#include "snakesim/model.hpp"

#include <cmath>
#include <string>

namespace snakesim {

namespace {

void check_q(const RobotModel& model, const VectorXd& q, const char* op) {
  if (q.size() != model.nq()) {
    throw InvalidInput(std::string(op) + ": expected q of dimension " +
                       std::to_string(model.nq()) + ", got " +
                       std::to_string(q.size()));
  }
  if (!q.allFinite()) {
    throw InvalidInput(std::string(op) + ": q has non-finite entries");
  }
}

void check_qv(const RobotModel& model, const VectorXd& q, const VectorXd& v,
              const char* op) {
  check_q(model, q, op);
  if (v.size() != model.nq()) {
    throw InvalidInput(std::string(op) + ": expected v of dimension " +
                       std::to_string(model.nq()) + ", got " +
                       std::to_string(v.size()));
  }
  if (!v.allFinite()) {
    throw InvalidInput(std::string(op) + ": v has non-finite entries");
  }
}

// Chain quantities shared by every configuration-dependent computation.
// Angle coordinate c (c = 2 for pitch, c = 3 + j for joint j) rotates link i
// iff first_link(c) <= i; joint j sits between links j and j + 1.
struct ChainFrames {
  std::vector<double> angle;      // absolute link angles
  std::vector<Vector2d> joint;    // proximal joint positions
  std::vector<Vector2d> axis;     // unit vector along each link
  std::vector<Vector2d> axis_n;   // axis rotated +90 degrees
};

int first_link(int coord) { return coord == 2 ? 0 : coord - 2; }

ChainFrames chain_frames(const RobotModel& model, const VectorXd& q) {
  const int n = model.num_links();
  ChainFrames f;
  f.angle.resize(n);
  f.joint.resize(n);
  f.axis.resize(n);
  f.axis_n.resize(n);
  double angle = q[2];
  Vector2d pos(q[0], q[1]);
  for (int i = 0; i < n; ++i) {
    if (i > 0) angle += q[3 + i - 1];
    f.angle[i] = angle;
    f.joint[i] = pos;
    f.axis[i] = Vector2d(std::cos(angle), std::sin(angle));
    f.axis_n[i] = Vector2d(-f.axis[i].y(), f.axis[i].x());
    pos += model.links[i].length * f.axis[i];
  }
  return f;
}

// Jacobian of a point `offset` along link `link`, given precomputed frames.
Matrix2Xd point_jacobian_impl(const RobotModel& model, const ChainFrames& f,
                              int link, double offset) {
  Matrix2Xd J = Matrix2Xd::Zero(2, model.nq());
  J(0, 0) = 1.0;
  J(1, 1) = 1.0;
  for (int c = 2; c < model.nq(); ++c) {
    const int lo = first_link(c);
    if (lo > link) break;
    Vector2d col = offset * f.axis_n[link];
    for (int k = lo; k < link; ++k) {
      col += model.links[k].length * f.axis_n[k];
    }
    J.col(c) = col;
  }
  return J;
}

// Angular velocity of link i is the sum of pitch rate and joint rates up to
// and including joint i - 1.
double link_angular_velocity(int link, const VectorXd& v) {
  double w = v[2];
  for (int j = 0; j < link; ++j) w += v[3 + j];
  return w;
}

}  // namespace

void RobotModel::validate() {
  if (links.empty()) {
    throw InvalidInput("model: at least one link required");
  }
  for (size_t i = 0; i < links.size(); ++i) {
    const LinkSpec& l = links[i];
    const std::string tag = "model: link " + std::to_string(i);
    if (!(l.mass > 0)) throw InvalidInput(tag + ": mass must be > 0");
    if (!(l.length > 0)) throw InvalidInput(tag + ": length must be > 0");
    if (!(l.inertia_about_com > 0)) {
      throw InvalidInput(tag + ": inertia must be > 0");
    }
    if (!(l.sphere_radius > 0)) {
      throw InvalidInput(tag + ": sphere radius must be > 0");
    }
    if (l.sphere_radius > l.length) {
      throw InvalidInput(tag + ": sphere radius must not exceed length");
    }
    if (l.com_offset < 0 || l.com_offset > l.length) {
      throw InvalidInput(tag + ": com offset must lie within [0, length]");
    }
    if (l.sphere_center_offset < 0 || l.sphere_center_offset > l.length) {
      throw InvalidInput(tag + ": sphere center offset must lie within [0, length]");
    }
  }
  if (!gravity.allFinite()) {
    throw InvalidInput("model: gravity must be finite");
  }
  if (wrench_link < 0) {
    wrench_link = num_links() - 1;
    wrench_point_offset = links.back().length;
  }
  if (wrench_link >= num_links()) {
    throw InvalidInput("model: wrench link index out of range");
  }
  if (wrench_point_offset < 0 ||
      wrench_point_offset > links[wrench_link].length) {
    throw InvalidInput("model: wrench point offset outside link");
  }
}

MatrixXd mass_matrix(const RobotModel& model, const VectorXd& q) {
  check_q(model, q, "mass_matrix");
  const int nq = model.nq();
  const ChainFrames f = chain_frames(model, q);
  MatrixXd M = MatrixXd::Zero(nq, nq);
  for (int i = 0; i < model.num_links(); ++i) {
    const LinkSpec& l = model.links[i];
    const Matrix2Xd Jv = point_jacobian_impl(model, f, i, l.com_offset);
    M.noalias() += l.mass * Jv.transpose() * Jv;
    // Angular Jacobian of link i: ones at pitch and joints 0..i-1.
    for (int a = 2; a <= 2 + i; ++a) {
      for (int b = 2; b <= 2 + i; ++b) {
        M(a, b) += l.inertia_about_com;
      }
    }
  }
  return M;
}

VectorXd bias_forces(const RobotModel& model, const VectorXd& q,
                     const VectorXd& v) {
  check_qv(model, q, v, "bias_forces");
  const ChainFrames f = chain_frames(model, q);
  VectorXd h = VectorXd::Zero(model.nq());
  // With qdd = 0 the link angular accelerations vanish (angular Jacobians
  // are constant), so only the centripetal COM accelerations contribute:
  //   a_com_i = sum_{k<i} L_k (-w_k^2) axis_k + c_i (-w_i^2) axis_i.
  for (int i = 0; i < model.num_links(); ++i) {
    const LinkSpec& l = model.links[i];
    Vector2d a = Vector2d::Zero();
    for (int k = 0; k < i; ++k) {
      const double wk = link_angular_velocity(k, v);
      a -= model.links[k].length * wk * wk * f.axis[k];
    }
    const double wi = link_angular_velocity(i, v);
    a -= l.com_offset * wi * wi * f.axis[i];
    const Matrix2Xd Jv = point_jacobian_impl(model, f, i, l.com_offset);
    h.noalias() += Jv.transpose() * (l.mass * (a - model.gravity));
  }
  return h;
}

ContactSet contact_candidates(const RobotModel& model, const VectorXd& q,
                              const VectorXd& v) {
  check_qv(model, q, v, "contact_candidates");
  const ChainFrames f = chain_frames(model, q);
  ContactSet contacts;
  contacts.reserve(model.links.size());
  for (int i = 0; i < model.num_links(); ++i) {
    const LinkSpec& l = model.links[i];
    const Vector2d center = f.joint[i] + l.sphere_center_offset * f.axis[i];
    ContactPoint c;
    c.link_index = i;
    c.position = center - Vector2d(0.0, l.sphere_radius);
    c.gap = center.y() - l.sphere_radius;
    c.normal = Vector2d(0.0, 1.0);
    c.jacobian = point_jacobian_impl(model, f, i, l.sphere_center_offset);
    const Vector2d vel = c.jacobian * v;
    c.tangential_velocity = vel.x();
    c.normal_velocity = vel.y();
    contacts.push_back(std::move(c));
  }
  return contacts;
}

MatrixXd actuation_matrix(const RobotModel& model) {
  MatrixXd S = MatrixXd::Zero(model.nq(), model.num_joints());
  for (int j = 0; j < model.num_joints(); ++j) S(3 + j, j) = 1.0;
  return S;
}

MatrixXd wrench_map(const RobotModel& model, const VectorXd& q) {
  check_q(model, q, "wrench_map");
  const ChainFrames f = chain_frames(model, q);
  const Matrix2Xd Jp =
      point_jacobian_impl(model, f, model.wrench_link, model.wrench_point_offset);
  MatrixXd W = MatrixXd::Zero(model.nq(), 3);
  W.leftCols<2>() = Jp.transpose();
  // Torque column: angular Jacobian of the wrench link.
  W(2, 2) = 1.0;
  for (int j = 0; j < model.wrench_link; ++j) W(3 + j, 2) = 1.0;
  return W;
}

VectorXd actuation_and_wrench(const RobotModel& model, const VectorXd& q,
                              const VectorXd& u, const Vector3d& w) {
  check_q(model, q, "actuation_and_wrench");
  if (u.size() != model.num_joints()) {
    throw InvalidInput("actuation_and_wrench: expected u of dimension " +
                       std::to_string(model.num_joints()) + ", got " +
                       std::to_string(u.size()));
  }
  VectorXd tau = VectorXd::Zero(model.nq());
  tau.tail(model.num_joints()) = u;
  if (!w.isZero()) {
    tau.noalias() += wrench_map(model, q) * w;
  }
  return tau;
}

Vector2d point_on_link(const RobotModel& model, const VectorXd& q, int link,
                       double offset) {
  check_q(model, q, "point_on_link");
  if (link < 0 || link >= model.num_links()) {
    throw InvalidInput("point_on_link: link index out of range");
  }
  const ChainFrames f = chain_frames(model, q);
  return f.joint[link] + offset * f.axis[link];
}

Matrix2Xd point_jacobian(const RobotModel& model, const VectorXd& q, int link,
                         double offset) {
  check_q(model, q, "point_jacobian");
  if (link < 0 || link >= model.num_links()) {
    throw InvalidInput("point_jacobian: link index out of range");
  }
  return point_jacobian_impl(model, chain_frames(model, q), link, offset);
}

VectorXd link_angles(const RobotModel& model, const VectorXd& q) {
  check_q(model, q, "link_angles");
  const ChainFrames f = chain_frames(model, q);
  return Eigen::Map<const VectorXd>(f.angle.data(), model.num_links());
}

Vector2d head_position(const RobotModel& model, const VectorXd& q) {
  return point_on_link(model, q, model.num_links() - 1,
                       model.links.back().length);
}

double kinetic_energy(const RobotModel& model, const VectorXd& q,
                      const VectorXd& v) {
  check_qv(model, q, v, "kinetic_energy");
  const ChainFrames f = chain_frames(model, q);
  double T = 0.0;
  for (int i = 0; i < model.num_links(); ++i) {
    const LinkSpec& l = model.links[i];
    const Matrix2Xd Jv = point_jacobian_impl(model, f, i, l.com_offset);
    const Vector2d vel = Jv * v;
    const double w = link_angular_velocity(i, v);
    T += 0.5 * l.mass * vel.squaredNorm() + 0.5 * l.inertia_about_com * w * w;
  }
  return T;
}

double potential_energy(const RobotModel& model, const VectorXd& q) {
  check_q(model, q, "potential_energy");
  const ChainFrames f = chain_frames(model, q);
  double V = 0.0;
  for (int i = 0; i < model.num_links(); ++i) {
    const LinkSpec& l = model.links[i];
    const Vector2d com = f.joint[i] + l.com_offset * f.axis[i];
    V -= l.mass * model.gravity.dot(com);
  }
  return V;
}

double mechanical_energy(const RobotModel& model, const State& state) {
  return kinetic_energy(model, state.q, state.v) +
         potential_energy(model, state.q);
}

}  // namespace snakesim
