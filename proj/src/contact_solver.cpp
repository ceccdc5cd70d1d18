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

#include "snakesim/contact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace snakesim {

namespace {

using nlohmann::json;

// Lower bound on the post-step normal velocity of contact i. The gap-based
// bound stops the step exactly at g_next = 0; an approaching contact with
// restitution gets the Newton impact target instead when it is stricter.
double velocity_target(const ContactInstance& c, double dt) {
  double target = -c.gap / dt;
  if (c.restitution > 0.0 && c.approach_velocity < 0.0) {
    target = std::max(target, -c.restitution * c.approach_velocity);
  }
  return target;
}

struct PgsWork {
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> W;  // M^{-1} J_i^T
  std::vector<Eigen::Matrix2d> D;                           // J_i W_i
  VectorXd targets;
};

// One projected Gauss-Seidel pass; returns the largest impulse change.
double sweep(const ContactProblem& problem, const PgsWork& work,
             double relaxation, VectorXd& fn, VectorXd& ft, VectorXd& v) {
  double max_delta = 0.0;
  for (int i = 0; i < problem.num_contacts(); ++i) {
    const ContactInstance& c = problem.contacts[i];
    const Eigen::Matrix2d& D = work.D[i];
    Vector2d gamma = c.jacobian * v;  // [tangential, normal]

    double fn_new = fn[i];
    if (D(1, 1) > std::numeric_limits<double>::min()) {
      fn_new = fn[i] - (gamma.y() - work.targets[i]) / D(1, 1);
      fn_new = std::max(0.0, fn[i] + relaxation * (fn_new - fn[i]));
    }
    const double dn = fn_new - fn[i];
    gamma.x() += D(0, 1) * dn;  // tangential velocity after the normal update

    double ft_new = ft[i];
    if (D(0, 0) > std::numeric_limits<double>::min()) {
      ft_new = ft[i] - gamma.x() / D(0, 0);
      ft_new = ft[i] + relaxation * (ft_new - ft[i]);
    }
    const double bound = c.mu * fn_new;
    ft_new = std::clamp(ft_new, -bound, bound);
    const double dt_imp = ft_new - ft[i];

    if (dn != 0.0 || dt_imp != 0.0) {
      v.noalias() += work.W[i] * Vector2d(dt_imp, dn);
    }
    fn[i] = fn_new;
    ft[i] = ft_new;
    max_delta = std::max({max_delta, std::abs(dn), std::abs(dt_imp)});
  }
  return max_delta;
}

// Fixed-point residual of the projected iteration, evaluated without
// mutating the iterate.
double natural_map_residual(const ContactProblem& problem, const PgsWork& work,
                            const VectorXd& fn, const VectorXd& ft,
                            const VectorXd& v) {
  double r = 0.0;
  for (int i = 0; i < problem.num_contacts(); ++i) {
    const ContactInstance& c = problem.contacts[i];
    const Eigen::Matrix2d& D = work.D[i];
    const Vector2d gamma = c.jacobian * v;
    double fn_proj = fn[i];
    if (D(1, 1) > std::numeric_limits<double>::min()) {
      fn_proj = std::max(0.0, fn[i] - (gamma.y() - work.targets[i]) / D(1, 1));
    }
    double ft_proj = ft[i];
    if (D(0, 0) > std::numeric_limits<double>::min()) {
      ft_proj = ft[i] - gamma.x() / D(0, 0);
    }
    const double bound = c.mu * fn_proj;
    ft_proj = std::clamp(ft_proj, -bound, bound);
    r = std::max({r, std::abs(fn_proj - fn[i]), std::abs(ft_proj - ft[i])});
  }
  return r;
}

json matrix_to_json(const MatrixXd& M) {
  json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  std::vector<double> data;
  data.reserve(static_cast<size_t>(M.size()));
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) data.push_back(M(r, c));
  }
  j["data"] = data;
  return j;
}

MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw InvalidInput(std::string("problem json: malformed matrix '") + what +
                       "'");
  }
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 ||
      static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw InvalidInput(std::string("problem json: matrix '") + what +
                       "' has inconsistent dimensions");
  }
  MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(r, c) = data[static_cast<size_t>(r * cols + c)];
    }
  }
  return M;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> keys,
                         const char* where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw InvalidInput(std::string("problem json: unknown key '") +
                         item.key() + "' in " + where);
    }
  }
}

}  // namespace

ImpulseSolution solve_impulses(const ContactProblem& problem,
                               const SolverSettings& settings) {
  const int nq = problem.nq();
  const int nc = problem.num_contacts();
  if (problem.M.rows() != nq || problem.M.cols() != nq) {
    throw InvalidInput("solve_impulses: M and vtilde dimensions disagree");
  }
  if (!(problem.dt > 0)) {
    throw InvalidInput("solve_impulses: dt must be > 0");
  }
  for (const ContactInstance& c : problem.contacts) {
    if (c.jacobian.cols() != nq) {
      throw InvalidInput("solve_impulses: contact Jacobian has wrong width");
    }
    if (c.mu < 0 || !std::isfinite(c.gap)) {
      throw InvalidInput("solve_impulses: invalid contact data");
    }
  }

  ImpulseSolution sol;
  sol.normal_impulse = VectorXd::Zero(nc);
  sol.tangential_impulse = VectorXd::Zero(nc);
  sol.gaps_next = VectorXd::Zero(nc);

  if (nc == 0) {
    sol.v_next = problem.vtilde;
    sol.status = SolveStatus::kConverged;
    return sol;
  }

  const auto llt = checked_llt(problem.M, "solve_impulses");

  PgsWork work;
  work.W.reserve(nc);
  work.D.reserve(nc);
  work.targets.resize(nc);
  for (int i = 0; i < nc; ++i) {
    const ContactInstance& c = problem.contacts[i];
    Eigen::Matrix<double, Eigen::Dynamic, 2> Wi =
        llt.solve(c.jacobian.transpose());
    work.D.push_back(c.jacobian * Wi);
    work.W.push_back(std::move(Wi));
    work.targets[i] = velocity_target(c, problem.dt);
  }

  VectorXd fn = VectorXd::Zero(nc);
  VectorXd ft = VectorXd::Zero(nc);
  VectorXd v = problem.vtilde;

  VectorXd best_fn = fn, best_ft = ft, best_v = v;
  double best_residual = natural_map_residual(problem, work, fn, ft, v);
  sol.residual_history.push_back(best_residual);

  const double relaxations[] = {1.0, 0.7, 0.4};
  bool converged = false;
  int total_iterations = 0;
  for (double omega : relaxations) {
    if (converged) break;
    fn.setZero();
    ft.setZero();
    v = problem.vtilde;
    for (int it = 0; it < settings.max_iterations; ++it) {
      sweep(problem, work, omega, fn, ft, v);
      ++total_iterations;
      const double r = natural_map_residual(problem, work, fn, ft, v);
      if (r < best_residual) {
        best_residual = r;
        best_fn = fn;
        best_ft = ft;
        best_v = v;
      }
      sol.residual_history.push_back(best_residual);
      const double scale = std::max(1.0, fn.lpNorm<Eigen::Infinity>());
      if (r <= settings.tolerance * scale) {
        converged = true;
        break;
      }
    }
  }

  sol.iterations = total_iterations;
  sol.normal_impulse = best_fn;
  sol.tangential_impulse = best_ft;
  // Reconstruct the velocity from the impulses so the dynamics identity is
  // exact rather than inherited from incremental updates.
  VectorXd generalized = VectorXd::Zero(nq);
  for (int i = 0; i < nc; ++i) {
    generalized.noalias() += problem.contacts[i].jacobian.transpose() *
                             Vector2d(best_ft[i], best_fn[i]);
  }
  sol.v_next = problem.vtilde + llt.solve(generalized);

  sol.force_scale = std::max(1.0, best_fn.lpNorm<Eigen::Infinity>());
  sol.residuals.natural_map = best_residual;
  sol.residuals.dynamics =
      (problem.M * (sol.v_next - problem.vtilde) - generalized)
          .lpNorm<Eigen::Infinity>();
  for (int i = 0; i < nc; ++i) {
    const ContactInstance& c = problem.contacts[i];
    const Vector2d gamma = c.jacobian * sol.v_next;
    sol.gaps_next[i] = c.gap + problem.dt * gamma.y();
    const double ghat = problem.dt * (gamma.y() - work.targets[i]);
    sol.residuals.complementarity =
        std::max(sol.residuals.complementarity, std::abs(ghat * best_fn[i]));
    sol.residuals.cone = std::max(
        sol.residuals.cone, std::abs(best_ft[i]) - c.mu * best_fn[i]);
    sol.residuals.penetration =
        std::max(sol.residuals.penetration, -std::min(0.0, sol.gaps_next[i]));
  }
  sol.residuals.cone = std::max(0.0, sol.residuals.cone);

  sol.status = converged ? SolveStatus::kConverged : SolveStatus::kMaxIterations;
  return sol;
}

std::pair<double, double> project_friction_cone(double fn, double ft,
                                                double mu) {
  if (!std::isfinite(fn) || !std::isfinite(ft) || !(mu >= 0)) {
    throw InvalidInput("project_friction_cone: non-finite input or mu < 0");
  }
  if (fn >= 0.0 && std::abs(ft) <= mu * fn) {
    return {fn, ft};  // interior or boundary
  }
  if (fn <= -mu * std::abs(ft)) {
    return {0.0, 0.0};  // polar cone
  }
  const double coef = (fn + mu * std::abs(ft)) / (1.0 + mu * mu);
  return {coef, (ft >= 0.0 ? 1.0 : -1.0) * mu * coef};
}

std::string problem_to_json(const ContactProblem& problem) {
  json j;
  j["schema_version"] = 1;
  j["dt"] = problem.dt;
  j["nq"] = problem.nq();
  j["M"] = matrix_to_json(problem.M);
  j["vtilde"] = std::vector<double>(problem.vtilde.data(),
                                    problem.vtilde.data() + problem.vtilde.size());
  json contacts = json::array();
  for (const ContactInstance& c : problem.contacts) {
    json jc;
    jc["link_index"] = c.link_index;
    jc["gap"] = c.gap;
    jc["normal"] = {c.normal.x(), c.normal.y()};
    jc["mu"] = c.mu;
    jc["restitution"] = c.restitution;
    jc["approach_velocity"] = c.approach_velocity;
    jc["jacobian"] = matrix_to_json(c.jacobian);
    contacts.push_back(jc);
  }
  j["contacts"] = contacts;
  return j.dump(2);
}

ContactProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("problem json: parse error: ") + e.what());
  }
  reject_unknown_keys(j, {"schema_version", "dt", "nq", "M", "vtilde", "contacts"},
                      "problem");
  if (j.value("schema_version", 0) != 1) {
    throw InvalidInput("problem json: unsupported schema_version");
  }
  ContactProblem p;
  p.dt = j.at("dt").get<double>();
  p.M = matrix_from_json(j.at("M"), "M");
  const auto vt = j.at("vtilde").get<std::vector<double>>();
  p.vtilde = Eigen::Map<const VectorXd>(vt.data(), vt.size());
  const Eigen::Index nq = j.at("nq").get<Eigen::Index>();
  if (p.M.rows() != nq || p.vtilde.size() != nq) {
    throw InvalidInput("problem json: nq disagrees with M/vtilde");
  }
  for (const json& jc : j.at("contacts")) {
    reject_unknown_keys(jc,
                        {"link_index", "gap", "normal", "mu", "restitution",
                         "approach_velocity", "jacobian"},
                        "contact");
    ContactInstance c;
    c.link_index = jc.at("link_index").get<int>();
    c.gap = jc.at("gap").get<double>();
    const auto n = jc.at("normal").get<std::vector<double>>();
    if (n.size() != 2) throw InvalidInput("problem json: normal must have 2 entries");
    c.normal = Vector2d(n[0], n[1]);
    c.mu = jc.at("mu").get<double>();
    c.restitution = jc.at("restitution").get<double>();
    c.approach_velocity = jc.at("approach_velocity").get<double>();
    const MatrixXd J = matrix_from_json(jc.at("jacobian"), "jacobian");
    if (J.rows() != 2 || J.cols() != nq) {
      throw InvalidInput("problem json: jacobian must be 2 x nq");
    }
    c.jacobian = J;
    p.contacts.push_back(std::move(c));
  }
  return p;
}

}  // namespace snakesim
