#pragma once

#include "tof/operator.hpp"
#include "tof/spline.hpp"

#include <array>
#include <vector>

namespace tof {

struct GroupElement {
  double theta = 0.0;
  double tau = 0.0;
};

// theta mapped into (-pi, pi]
double canonical_angle(double theta);
// min_k |theta - 2 pi k| + |tau|
double metric(const GroupElement& g);
GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement difference(const GroupElement& a, const GroupElement& b);

// (R_{-theta} v(. - tau), R_{-theta} rho); cubic spline with constant extrapolation.
ExtendedState act(const GroupElement& g, const Grid1D& grid, const ExtendedState& s);

struct Decomposition {
  GroupElement z;
  Eigen::VectorXd w;  // coordinates
  int iterations = 0;
  std::array<double, 2> orth{0.0, 0.0};  // |(psi_i, w)| / ||w||_X
};

struct ReducedRhs {
  double theta_dot = 0.0;
  double tau_dot = 0.0;
  Eigen::VectorXd w_dot;
  Eigen::Matrix2d M;
};

// Group orbit of the profile together with the kernel/adjoint data of its linearization.
class GroupOrbit {
 public:
  GroupOrbit(const Discretization& d, const SpectralData& sd);

  const Discretization& disc() const { return d_; }
  const SpectralData& spectral() const { return sd_; }
  ExtendedState profile_state() const;

  Eigen::VectorXd orbit_point(const GroupElement& g) const;  // a(g) (v_*, v_inf)
  // d/dtheta and d/dtau of a(g) (v_*, v_inf)
  Eigen::VectorXd d_theta(const GroupElement& g) const;
  Eigen::VectorXd d_tau(const GroupElement& g) const;
  // a(g) applied to the numerical kernel vectors (j = 1, 2)
  Eigen::VectorXd acted_phi(int j, const GroupElement& g) const;
  // M_ij = (psi_i, a(g) phi_j)
  Eigen::Matrix2d m_matrix(const GroupElement& g) const;

  // Newton solve of (psi_i, u - a(z) v_*) = 0 starting from guess; theta is tracked
  // continuously. Error(numerical, "decomposition-failure") on divergence.
  Decomposition decompose(const Eigen::VectorXd& u, const GroupElement& guess = {}) const;

  // f(a(z) v_* + w) - f(a(z) v_*) - Df(v_*) w and the same for rho with v_inf.
  Eigen::VectorXd remainder_rf(const GroupElement& z, const Eigen::VectorXd& w) const;
  ReducedRhs reduced_rhs(const GroupElement& z, const Eigen::VectorXd& w) const;

  double norm_x1(const Eigen::VectorXd& y) const;
  double norm_x(const Eigen::VectorXd& y) const;

 private:
  Eigen::VectorXd shifted_rotated(const std::array<UniformSpline, 2>& sp, const Vec2& far, const GroupElement& g,
                                  bool derivative) const;

  const Discretization& d_;
  const SpectralData& sd_;
  std::array<UniformSpline, 2> prof_, phi1_, phi2_;
};

// max over the theta and tau directions of ||r_f(z + dz e_k, w) - r_f(z, w)||_{X1} / |dz|
double lipschitz_estimate(const GroupOrbit& orbit, const GroupElement& z, const Eigen::VectorXd& w, double dz);

struct Perturbation {
  ExtendedState localized;
  Vec2 rho0 = Vec2::Zero();
};
// localized + (rho0 vhat, rho0)
ExtendedState perturbation_state(const Discretization& d, const Perturbation& p);
// Gaussian bump exp(-(x - center)^2 / (2 width^2)) dir scaled to the given X1_eta norm.
Perturbation bump_perturbation(const Discretization& d, double center, double width, const Vec2& dir, double norm,
                               const Vec2& rho0);

struct ExperimentConfig {
  double dt = 0.01;
  double t_end = 60.0;
  double decompose_every = 0.5;
  double eps0 = 1e-2;
  double solver_tol = 1e-12;
};

struct DecompositionTrace {
  std::vector<double> times;
  std::vector<GroupElement> z;
  std::vector<double> w_norm;
  std::vector<std::array<double, 2>> orth;
  double v0_norm = 0.0;
  double t_fit_start = 0.0, t_fit_end = 0.0;
  double beta_fit = 0.0;
  double beta_r2 = 0.0;
  double K_fit = 0.0;
  GroupElement gamma_inf;
  double gamma_ratio = 0.0;  // |gamma_inf|_G / ||v_0||
  double gamma_rate = 0.0;   // fitted decay rate of |gamma(t) - gamma_inf|_G
  int max_newton = 0;
};

// Simulates the extended system from v_* + v_0 in the co-moving frame and decomposes
// snapshots. Error(numerical, "decomposition-failure") when ||v_0|| > eps0 or Newton fails;
// Error(assumption, "no-decay") when w does not decay.
DecompositionTrace run_experiment(const GroupOrbit& orbit, const Perturbation& pert, const ExperimentConfig& cfg);

struct ReducedComparison {
  std::vector<double> times;
  std::vector<double> rel_error;  // ||u_reduced - u_direct||_{X1} / ||u_direct - v_*||_{X1}
  double max_rel_error = 0.0;
};
// Integrates the reduced (z, w) system and the direct system from the same data.
ReducedComparison compare_reduced_direct(const GroupOrbit& orbit, const ExtendedState& u0, double t_end, double dt,
                                         double sample_every);

}  // namespace tof
