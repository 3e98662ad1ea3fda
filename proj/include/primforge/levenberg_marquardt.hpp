// Copyright (c) 2026 The PrimForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "primforge/parallel.hpp"

namespace primforge {

struct LmOptions {
  int max_iters = 60;
  double tol = 1e-6;        // relative cost-change stopping threshold
  double fd_step = 1e-6;    // central-difference step, scaled by |x_j|
  double lambda_init = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 3.0;
  double lambda_max = 1e10;
};

struct LmResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
};

/// Damped least squares with a central-finite-difference Jacobian. residual
/// must be pure (it is evaluated from several threads while the Jacobian is
/// assembled); project is applied to every trial point and to x0. Only
/// cost-decreasing steps are accepted, so the accepted-cost sequence is
/// monotone. Returns the best point seen.
template <typename ResidualFn, typename ProjectFn>
LmResult levenberg_marquardt(ResidualFn&& residual, ProjectFn&& project, Eigen::VectorXd x0,
                             int residual_dim, const LmOptions& opts = {}) {
  const int np = int(x0.size());
  project(x0);

  Eigen::VectorXd r(residual_dim);
  residual(x0, r);
  double cost = r.squaredNorm();

  LmResult result;
  result.x = x0;
  result.cost = cost;

  Eigen::MatrixXd J(residual_dim, np);
  double lambda = opts.lambda_init;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    result.iterations = iter + 1;

    // central differences, one column per parameter
    parallel_for(np, [&](std::int64_t jl) {
      const int j = int(jl);
      const double h = opts.fd_step * std::max(1.0, std::abs(result.x[j]));
      Eigen::VectorXd xp = result.x, xm = result.x;
      xp[j] += h;
      xm[j] -= h;
      Eigen::VectorXd rp(residual_dim), rm(residual_dim);
      residual(xp, rp);
      residual(xm, rm);
      J.col(j) = (rp - rm) / (2.0 * h);
    });

    residual(result.x, r);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::VectorXd diag = JtJ.diagonal().cwiseMax(1e-12);

    bool stepped = false;
    while (lambda <= opts.lambda_max) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += lambda * diag;
      const Eigen::VectorXd delta = A.ldlt().solve(-g);
      Eigen::VectorXd x_trial = result.x + delta;
      project(x_trial);

      Eigen::VectorXd r_trial(residual_dim);
      residual(x_trial, r_trial);
      const double cost_trial = r_trial.squaredNorm();
      if (cost_trial < result.cost) {
        const double rel_change = (result.cost - cost_trial) / std::max(result.cost, 1e-300);
        result.x = x_trial;
        result.cost = cost_trial;
        lambda = std::max(lambda / opts.lambda_down, 1e-12);
        stepped = true;
        if (rel_change < opts.tol) {
          result.converged = true;
          return result;
        }
        break;
      }
      lambda *= opts.lambda_up;
    }
    if (!stepped) {
      // no damping value yields an improvement: stationary for this Jacobian
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace primforge
