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

#include "snakesim/trajectory_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace snakesim {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

double TrajectoryLog::displacement() const {
  if (head.size() < 2) return 0.0;
  return head.back().x() - head.front().x();
}

double TrajectoryLog::peak_contact_force() const {
  double peak = 0.0;
  for (const VectorXd& f : fn) {
    if (f.size() > 0) peak = std::max(peak, f.lpNorm<Eigen::Infinity>());
  }
  return peak;
}

void TrajectoryLog::write_csv(const std::string& path, int stride) const {
  if (stride < 1) throw InvalidInput("write_csv: stride must be >= 1");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);

  std::ostringstream header;
  header << "t,energy,head_x,head_z";
  for (int i = 0; i < nq; ++i) header << ",q" << i;
  for (int i = 0; i < nq; ++i) header << ",v" << i;
  for (int i = 0; i < n_joints; ++i) header << ",u" << i;
  for (int i = 0; i < n_spheres; ++i) header << ",fn" << i;
  for (int i = 0; i < n_spheres; ++i) header << ",ft" << i;
  for (int i = 0; i < n_spheres; ++i) header << ",gap" << i;
  out << header.str() << "\n";

  auto write_row = [&](size_t s) {
    std::ostringstream row;
    row << format_double(time[s]) << ',' << format_double(energy[s]) << ','
        << format_double(head[s].x()) << ',' << format_double(head[s].y());
    for (int i = 0; i < nq; ++i) row << ',' << format_double(q[s][i]);
    for (int i = 0; i < nq; ++i) row << ',' << format_double(v[s][i]);
    for (int i = 0; i < n_joints; ++i) row << ',' << format_double(u[s][i]);
    for (int i = 0; i < n_spheres; ++i) row << ',' << format_double(fn[s][i]);
    for (int i = 0; i < n_spheres; ++i) row << ',' << format_double(ft[s][i]);
    for (int i = 0; i < n_spheres; ++i) row << ',' << format_double(gap[s][i]);
    out << row.str() << "\n";
  };

  const size_t n = size();
  for (size_t s = 0; s < n; s += static_cast<size_t>(stride)) write_row(s);
  if (n > 0 && (n - 1) % static_cast<size_t>(stride) != 0) write_row(n - 1);
}

std::string run_summary_json(const TrajectoryLog& log, const RunMeta& meta) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["engine"] = meta.engine;
  j["mode"] = meta.mode;
  j["dt"] = meta.dt;
  j["horizon_s"] = meta.horizon;
  j["samples"] = log.size();
  j["displacement_m"] = log.displacement();
  if (!log.head.empty()) {
    j["head_initial"] = {log.head.front().x(), log.head.front().y()};
    j["head_final"] = {log.head.back().x(), log.head.back().y()};
  }
  double peak_u = 0.0, sum_abs_u = 0.0;
  size_t n_u = 0;
  for (const VectorXd& ui : log.u) {
    if (ui.size() == 0) continue;
    peak_u = std::max(peak_u, ui.lpNorm<Eigen::Infinity>());
    sum_abs_u += ui.cwiseAbs().sum();
    n_u += static_cast<size_t>(ui.size());
  }
  j["peak_torque_Nm"] = peak_u;
  j["mean_abs_torque_Nm"] = n_u > 0 ? sum_abs_u / static_cast<double>(n_u) : 0.0;
  j["peak_contact_force_N"] = log.peak_contact_force();

  nlohmann::json inv;
  inv["max_penetration_m"] = log.stats.max_penetration;
  inv["max_cone_violation"] = log.stats.max_cone_violation;
  inv["max_complementarity_residual"] = log.stats.max_complementarity;
  inv["max_dynamics_residual"] = log.stats.max_dynamics_residual;
  inv["max_torque_Nm"] = log.stats.max_torque;
  inv["max_allocation_roundtrip"] = log.stats.max_allocation_roundtrip;
  inv["max_solver_iterations"] = log.stats.max_solver_iterations;
  j["invariants"] = inv;

  std::vector<double> energy;
  for (size_t s = 0; s < log.energy.size();
       s += static_cast<size_t>(std::max(1, meta.energy_stride))) {
    energy.push_back(log.energy[s]);
  }
  j["energy_trace_J"] = energy;

  nlohmann::json m;
  m["config"] = meta.config_path;
  m["seed"] = meta.seed;
  m["created_at"] = meta.created_at;
  j["meta"] = m;
  return j.dump(2);
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("csv: empty file " + path);
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) table.columns.push_back(tok);
  if (table.columns.empty()) throw InvalidInput("csv: no header in " + path);

  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.columns.size());
    std::stringstream ls(line);
    while (std::getline(ls, tok, ',')) {
      try {
        row.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw InvalidInput("csv: non-numeric value at " + path + ":" +
                           std::to_string(line_no));
      }
    }
    if (row.size() != table.columns.size()) {
      throw InvalidInput("csv: row width mismatch at " + path + ":" +
                         std::to_string(line_no));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

int CsvTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace snakesim
