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

#include "solver.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "idldp/error.h"

namespace idldp::internal {

namespace {

constexpr double kLambdaMin = 1e-10;
constexpr double kLambdaMax = 1e8;
constexpr double kArmijo = 1e-4;

}  // namespace

void Polytope::AddRow(const Eigen::VectorXd& g, double h) {
  if (static_cast<std::size_t>(g.size()) != dim_) throw std::invalid_argument("row dimension");
  const double norm = g.norm();
  if (norm == 0.0) throw std::invalid_argument("zero constraint row");
  const Eigen::Index r = g_.rows();
  g_.conservativeResize(r + 1, static_cast<Eigen::Index>(dim_));
  h_.conservativeResize(r + 1);
  g_.row(r) = g.transpose() / norm;
  h_[r] = h / norm;
}

void Polytope::AddLowerBound(std::size_t index, double lower) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  g[static_cast<Eigen::Index>(index)] = -1.0;
  AddRow(g, -lower);
}

void Polytope::AddUpperBound(std::size_t index, double upper) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  g[static_cast<Eigen::Index>(index)] = 1.0;
  AddRow(g, upper);
}

double Polytope::MaxViolation(const Eigen::VectorXd& x) const {
  if (g_.rows() == 0) return 0.0;
  return std::max(0.0, (g_ * x - h_).maxCoeff());
}

void Polytope::SetInterior(const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != dim_) throw std::invalid_argument("point dimension");
  if (g_.rows() > 0 && (g_ * x - h_).maxCoeff() >= 0.0) {
    throw SolverError("interior point does not satisfy the constraints strictly");
  }
  interior_ = x;
}

Eigen::VectorXd Polytope::Clip(const Eigen::VectorXd& x) const {
  if (g_.rows() == 0 || (g_ * x - h_).maxCoeff() <= 0.0) return x;
  const Eigen::VectorXd dir = x - interior_;
  const Eigen::VectorXd slack = h_ - g_ * interior_;
  const Eigen::VectorXd rate = g_ * dir;
  double t = 1.0;
  for (Eigen::Index k = 0; k < rate.size(); ++k) {
    if (rate[k] > 0.0) t = std::min(t, slack[k] / rate[k]);
  }
  Eigen::VectorXd y = interior_ + t * dir;
  while ((g_ * y - h_).maxCoeff() > 0.0) {
    t *= 1.0 - 1e-12;
    y = interior_ + t * dir;
  }
  return y;
}

Eigen::VectorXd Polytope::Project(const Eigen::VectorXd& z, const Eigen::VectorXd& hint) const {
  if (g_.rows() == 0 || (g_ * z - h_).maxCoeff() <= 0.0) return z;
  if (interior_.size() == 0) throw SolverError("polytope has no interior point");

  Eigen::VectorXd x = Clip(hint);
  std::vector<Eigen::Index> working;
  const std::size_t max_iters = 20 * (rows() + dim_) + 100;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd r = z - x;
    Eigen::VectorXd p = r;
    Eigen::VectorXd mu;
    if (!working.empty()) {
      Eigen::MatrixXd at(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(working.size()));
      for (std::size_t c = 0; c < working.size(); ++c) {
        at.col(static_cast<Eigen::Index>(c)) = g_.row(working[c]).transpose();
      }
      mu = at.colPivHouseholderQr().solve(r);
      p = r - at * mu;
    }
    if (p.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + r.cwiseAbs().maxCoeff())) {
      if (working.empty()) return Clip(x);
      Eigen::Index drop = 0;
      const double most_negative = mu.minCoeff(&drop);
      if (most_negative >= -1e-14 * (1.0 + mu.cwiseAbs().maxCoeff())) return Clip(x);
      working.erase(working.begin() + drop);
      continue;
    }
    double alpha = 1.0;
    Eigen::Index block = -1;
    const double parallel_tol = 1e-12 * p.norm();
    for (Eigen::Index k = 0; k < g_.rows(); ++k) {
      if (std::find(working.begin(), working.end(), k) != working.end()) continue;
      const double gp = g_.row(k).dot(p);
      if (gp <= parallel_tol) continue;
      const double ratio = std::max(0.0, h_[k] - g_.row(k).dot(x)) / gp;
      if (ratio < alpha) {
        alpha = ratio;
        block = k;
      }
    }
    x += alpha * p;
    if (block >= 0) working.push_back(block);
  }
  return Clip(x);
}

SpgResult MinimizeSpg(const SmoothObjective& objective, const Polytope& feasible,
                      const Eigen::VectorXd& start, const SpgSettings& settings) {
  SpgResult result;
  Eigen::VectorXd x = feasible.Project(start);
  if (feasible.rows() > 0) x = feasible.Clip(x);
  Eigen::VectorXd g(x.size());
  double fx = objective(x, &g);
  if (!std::isfinite(fx)) throw SolverError("solver start point lies outside the domain");
  result.x = x;
  result.value = fx;

  std::deque<double> history{fx};
  const Eigen::VectorXd pg = feasible.Project(x - g, x) - x;
  double lambda =
      std::clamp(1.0 / std::max(pg.cwiseAbs().maxCoeff(), 1e-12), kLambdaMin, kLambdaMax);

  Eigen::VectorXd gn(x.size());
  for (std::size_t it = 0; it < settings.max_iters; ++it) {
    result.iterations = it + 1;
    const Eigen::VectorXd d = feasible.Project(x - lambda * g, x) - x;
    const double gd = g.dot(d);
    if (d.cwiseAbs().maxCoeff() <= settings.step_tol || gd >= 0.0) {
      result.converged = true;
      break;
    }
    const double fmax = *std::max_element(history.begin(), history.end());
    double alpha = 1.0;
    double fn = std::numeric_limits<double>::infinity();
    Eigen::VectorXd xn;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      xn = x + alpha * d;
      fn = objective(xn, &gn);
      if (std::isfinite(fn) && fn <= fmax + kArmijo * alpha * gd) {
        accepted = true;
        break;
      }
      double next = 0.5 * alpha;
      if (std::isfinite(fn)) {
        const double denom = fn - fx - alpha * gd;
        if (denom > 0.0) {
          const double trial = -0.5 * alpha * alpha * gd / denom;
          if (trial >= 0.1 * alpha && trial <= 0.5 * alpha) next = trial;
        }
      }
      alpha = next;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    x = xn;
    g = gn;
    fx = fn;
    history.push_back(fx);
    if (history.size() > settings.memory) history.pop_front();
    if (fx < result.value) {
      result.value = fx;
      result.x = x;
    }
    const double sty = s.dot(y);
    lambda = sty <= 0.0 ? kLambdaMax : std::clamp(s.squaredNorm() / sty, kLambdaMin, kLambdaMax);
  }
  return result;
}

}  // namespace idldp::internal
