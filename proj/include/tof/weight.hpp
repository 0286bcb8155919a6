#pragma once

#include "tof/common.hpp"

namespace tof {

// eta(x) = exp(mu sqrt(x^2 + 1)), template vhat(x) = tanh(mu_hat x)/2 + 1/2.
struct WeightSpec {
  double mu = 0.05;
  double mu_hat = 0.2;

  // Throws Error(config, "weight") unless mu >= 0, mu_hat > 0 and, for mu > 0,
  // mu < 2 mu_hat <= mu_star.
  void validate(double mu_star) const;
  double eta(double x) const;
  double vhat(double x) const;
  double dvhat(double x) const;
};

// Trapezoid weights on the grid.
Eigen::VectorXd trapezoid_weights(const Grid1D& grid);

// (rho, zeta) + (u - rho vhat, v - zeta vhat)_{L2_eta} (+ (u_x, v_x)_{L2_eta} for order 1).
double weighted_inner(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u, const ExtendedState& v,
                      int order = 0);
double norm_X(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u);
double norm_X1(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u);

// State (vhat rho, rho).
ExtendedState template_state(const WeightSpec& w, const Grid1D& grid, const Vec2& rho);

}  // namespace tof
