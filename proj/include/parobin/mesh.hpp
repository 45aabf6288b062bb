// Copyright (c) the parobin contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PAROBIN_MESH_HPP
#define PAROBIN_MESH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "parobin/errors.hpp"

namespace parobin {

// Uniform 1D P1 mesh on [a, b]. Trivially copyable; node coordinates are
// computed on demand so DiscreteFunction can carry its mesh by value.
class Mesh {
 public:
  Mesh(double a, double b, int cells);

  double a() const { return a_; }
  double b() const { return b_; }
  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double h() const { return (b_ - a_) / cells_; }
  double node(int i) const { return a_ + i * h(); }
  // Trapezoid weight of node i (h/2 at the endpoints, h inside).
  double weight(int i) const { return (i == 0 || i == cells_) ? 0.5 * h() : h(); }

  bool operator==(const Mesh& other) const {
    return a_ == other.a_ && b_ == other.b_ && cells_ == other.cells_;
  }

 private:
  double a_;
  double b_;
  int cells_;
};

// Nodal values of a P1 function. Value semantics throughout; the derivative
// is the piecewise-constant cell slope.
class DiscreteFunction {
 public:
  DiscreteFunction(Mesh mesh, double fill = 0.0);
  DiscreteFunction(Mesh mesh, std::vector<double> values);

  const Mesh& mesh() const { return mesh_; }
  int size() const { return static_cast<int>(v_.size()); }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  double slope(int cell) const { return (v_[cell + 1] - v_[cell]) / mesh_.h(); }

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

  DiscreteFunction positive_part() const;
  DiscreteFunction negative_part() const;  // u^- >= 0, u = u^+ - u^-

 private:
  Mesh mesh_;
  std::vector<double> v_;
};

void require_same_mesh(const DiscreteFunction& u, const DiscreteFunction& v);

// || u ||_p^p by the trapezoid rule on |u|^p nodal values.
double norm_Lp_pow(const DiscreteFunction& u, double p);
double norm_Lp(const DiscreteFunction& u, double p);

// (||u||_p^p + ||Du||_p^p)^{1/p}; the slope term is exact per cell.
double norm_W1p(const DiscreteFunction& u, double p);

// beta_left |u(a)|^p + beta_right |u(b)|^p (counting measure on the two
// boundary points).
double boundary_term(const DiscreteFunction& u, const std::array<double, 2>& beta, double p);

// max nodal |u - v| + max cell-slope |Du - Dv|.
double c1_distance(const DiscreteFunction& u, const DiscreteFunction& v);

enum class ConeLocation { InDPlus, InCPlusOnly, Outside };

ConeLocation cone_check(const DiscreteFunction& u, double strict_tol = 1e-8);

// CSV with columns (z, u); extra_columns appends more per-node series.
void write_csv(const DiscreteFunction& u, const std::string& path,
               const std::vector<std::string>& header_comments = {},
               const std::vector<std::pair<std::string, std::vector<double>>>& extra_columns = {});

DiscreteFunction read_csv(const std::string& path, const Mesh& expected_mesh);

}  // namespace parobin

#endif
