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
#include <vector>

#include "snakesim/common.hpp"

namespace snakesim {

/// Time series of a simulation run. Sample i holds the state at t_i together
/// with the command and contact forces applied over [t_i, t_{i+1}); the final
/// sample carries zero command and forces. Contact forces are reported in
/// newtons (impulse divided by dt for the time-stepping engine).
struct TrajectoryLog {
  int nq = 0;
  int n_joints = 0;
  int n_spheres = 0;

  std::vector<double> time;
  std::vector<double> energy;       // mechanical energy, J
  std::vector<Vector2d> head;       // head tip position
  std::vector<VectorXd> q, v;
  std::vector<VectorXd> u;          // n_joints
  std::vector<VectorXd> fn, ft;     // per sphere, N
  std::vector<VectorXd> gap;        // per sphere, m

  /// Worst-case step diagnostics accumulated over the run.
  struct InvariantStats {
    double max_penetration = 0.0;          // m, from true post-step gaps
    double max_cone_violation = 0.0;       // N s
    double max_complementarity = 0.0;      // scaled by per-step force scale
    double max_dynamics_residual = 0.0;
    double max_torque = 0.0;               // N m
    double max_allocation_roundtrip = 0.0;  // allocation mode only
    int max_solver_iterations = 0;
  } stats;

  size_t size() const { return time.size(); }

  /// Head forward displacement between the first and last sample.
  double displacement() const;
  double peak_contact_force() const;

  /// One row per sample (subsampled by `stride`, final sample always
  /// included), %.17g formatting for bit-stable output.
  void write_csv(const std::string& path, int stride = 1) const;
};

struct RunMeta {
  std::string engine;   // "moreau" | "penalty"
  std::string mode;     // "pd" | "allocation"
  double dt = 0.0;
  double horizon = 0.0;
  std::string config_path;
  unsigned seed = 0;
  std::string created_at;  // the only wall-clock dependent field
  int energy_stride = 1;
};

/// Run summary (displacement, torque and contact-force peaks, invariant
/// maxima, energy trace) as a JSON string.
std::string run_summary_json(const TrajectoryLog& log, const RunMeta& meta);

/// Minimal CSV reader for column-oriented numeric tables with a header line.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  static CsvTable read(const std::string& path);
  int column_index(const std::string& name) const;  // -1 when absent
};

}  // namespace snakesim
