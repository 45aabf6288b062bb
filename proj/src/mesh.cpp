// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#include "parobin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace parobin {

Mesh::Mesh(double a, double b, int cells) : a_(a), b_(b), cells_(cells) {
  if (!(a < b)) throw ConfigError("mesh: interval endpoints must satisfy a < b");
  if (cells < 4) throw ConfigError("mesh: need at least 4 cells");
}

DiscreteFunction::DiscreteFunction(Mesh mesh, double fill)
    : mesh_(mesh), v_(static_cast<std::size_t>(mesh.nodes()), fill) {}

DiscreteFunction::DiscreteFunction(Mesh mesh, std::vector<double> values)
    : mesh_(mesh), v_(std::move(values)) {
  if (static_cast<int>(v_.size()) != mesh_.nodes())
    throw MeshMismatch("DiscreteFunction: value count does not match node count");
}

double DiscreteFunction::min() const { return *std::min_element(v_.begin(), v_.end()); }

double DiscreteFunction::max() const { return *std::max_element(v_.begin(), v_.end()); }

double DiscreteFunction::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool DiscreteFunction::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

DiscreteFunction DiscreteFunction::positive_part() const {
  DiscreteFunction out(mesh_);
  for (int i = 0; i < size(); ++i) out[i] = std::max(v_[i], 0.0);
  return out;
}

DiscreteFunction DiscreteFunction::negative_part() const {
  DiscreteFunction out(mesh_);
  for (int i = 0; i < size(); ++i) out[i] = std::max(-v_[i], 0.0);
  return out;
}

void require_same_mesh(const DiscreteFunction& u, const DiscreteFunction& v) {
  if (!(u.mesh() == v.mesh())) throw MeshMismatch("operands live on different meshes");
}

double norm_Lp_pow(const DiscreteFunction& u, double p) {
  const Mesh& m = u.mesh();
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += m.weight(i) * std::pow(std::abs(u[i]), p);
  return s;
}

double norm_Lp(const DiscreteFunction& u, double p) { return std::pow(norm_Lp_pow(u, p), 1.0 / p); }

double norm_W1p(const DiscreteFunction& u, double p) {
  const Mesh& m = u.mesh();
  double s = norm_Lp_pow(u, p);
  for (int c = 0; c < m.cells(); ++c) s += m.h() * std::pow(std::abs(u.slope(c)), p);
  return std::pow(s, 1.0 / p);
}

double boundary_term(const DiscreteFunction& u, const std::array<double, 2>& beta, double p) {
  const int n = u.size() - 1;
  return beta[0] * std::pow(std::abs(u[0]), p) + beta[1] * std::pow(std::abs(u[n]), p);
}

double c1_distance(const DiscreteFunction& u, const DiscreteFunction& v) {
  require_same_mesh(u, v);
  double dv = 0.0;
  for (int i = 0; i < u.size(); ++i) dv = std::max(dv, std::abs(u[i] - v[i]));
  double ds = 0.0;
  for (int c = 0; c < u.mesh().cells(); ++c) ds = std::max(ds, std::abs(u.slope(c) - v.slope(c)));
  return dv + ds;
}

ConeLocation cone_check(const DiscreteFunction& u, double strict_tol) {
  double lo = u.min();
  if (lo > strict_tol) return ConeLocation::InDPlus;
  if (lo >= -strict_tol) return ConeLocation::InCPlusOnly;
  return ConeLocation::Outside;
}

void write_csv(const DiscreteFunction& u, const std::string& path,
               const std::vector<std::string>& header_comments,
               const std::vector<std::pair<std::string, std::vector<double>>>& extra_columns) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.precision(17);
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "z,u";
  for (const auto& [name, col] : extra_columns) out << "," << name;
  out << "\n";
  for (int i = 0; i < u.size(); ++i) {
    out << u.mesh().node(i) << "," << u[i];
    for (const auto& [name, col] : extra_columns) out << "," << col[static_cast<std::size_t>(i)];
    out << "\n";
  }
}

DiscreteFunction read_csv(const std::string& path, const Mesh& expected_mesh) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("z,", 0) == 0) continue;
    std::istringstream ss(line);
    std::string zs, us;
    if (!std::getline(ss, zs, ',') || !std::getline(ss, us, ',')) continue;
    vals.push_back(std::stod(us));
  }
  if (static_cast<int>(vals.size()) != expected_mesh.nodes())
    throw MeshMismatch("profile in " + path + " does not match the configured mesh");
  return DiscreteFunction(expected_mesh, std::move(vals));
}

}  // namespace parobin
