// Copyright 2026 The idldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense building blocks for the profile solvers: Euclidean projection
// onto a polyhedron and a spectral projected gradient method.

#ifndef IDLDP_SRC_SOLVER_H_
#define IDLDP_SRC_SOLVER_H_

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

namespace idldp::internal {

// {x : G x <= h} with a known strictly interior point.
class Polytope {
 public:
  explicit Polytope(std::size_t dim) : dim_(dim) {}

  // Must satisfy every row strictly; set after the rows are added.
  void SetInterior(const Eigen::VectorXd& x);
  const Eigen::VectorXd& interior() const { return interior_; }

  // Adds the half-space g.x <= h. Rows are stored normalized.
  void AddRow(const Eigen::VectorXd& g, double h);
  // x[index] >= lower.
  void AddLowerBound(std::size_t index, double lower);
  // x[index] <= upper.
  void AddUpperBound(std::size_t index, double upper);

  std::size_t dim() const { return dim_; }
  std::size_t rows() const { return static_cast<std::size_t>(g_.rows()); }

  // Closest feasible point to z in the Euclidean norm, by a primal active-set
  // method started at `hint` (pulled into the polytope along the segment
  // from the interior point when needed). A rank-deficient working set can
  // leave the last step marginally outside; the result is clipped back.
  Eigen::VectorXd Project(const Eigen::VectorXd& z, const Eigen::VectorXd& hint) const;
  Eigen::VectorXd Project(const Eigen::VectorXd& z) const { return Project(z, interior_); }
  // The point of the segment interior -> x closest to x that is feasible.
  Eigen::VectorXd Clip(const Eigen::VectorXd& x) const;
  // max(0, max_k g_k.x - h_k).
  double MaxViolation(const Eigen::VectorXd& x) const;

 private:
  std::size_t dim_;
  Eigen::MatrixXd g_;
  Eigen::VectorXd h_;
  Eigen::VectorXd interior_;
};

// Value and gradient. Returns +infinity outside the function's domain.
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct SpgSettings {
  std::size_t max_iters = 5000;
  double step_tol = 1e-10;
  std::size_t memory = 10;
};

struct SpgResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Nonmonotone spectral projected gradient over `feasible`. The start point
// is projected first. Returns the best iterate seen.
SpgResult MinimizeSpg(const SmoothObjective& objective, const Polytope& feasible,
                      const Eigen::VectorXd& start, const SpgSettings& settings);

}  // namespace idldp::internal

#endif  // IDLDP_SRC_SOLVER_H_
