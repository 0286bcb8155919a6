#pragma once

#include "tof/cgl_model.hpp"
#include "tof/common.hpp"
#include "tof/evolve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tof {

inline constexpr double tol_hyp = 1e-8;

struct LinearizationData {
  Eigen::MatrixXd jacobian;
  Eigen::VectorXcd eigenvalues;
  int stable_dim = 0;
  int unstable_dim = 0;
  double rate = 0.0;
};

// DH(0) = [[0, I], [-A^{-1}(S_omega + Df(0)), -c A^{-1}]]; rate = smallest positive
// real part among unstable eigenvalues. Throws Error(numerical, "non-hyperbolic").
LinearizationData minus_linearization(const CglParams& p, const Frame& frame);

struct PolarState {
  double r = 0.0;
  double q = 0.0;
  double kappa = 0.0;
};
struct PolarRhs {
  double dr = 0.0;
  double dq = 0.0;
  double dkappa = 0.0;
};

// r' = r kappa, (kappa', q') = (q^2 - kappa^2, -2 kappa q) - A^{-1} (c kappa + g1(r^2), c q + omega + g2(r^2)).
PolarRhs polar_rhs(const CglParams& p, const Frame& frame, const PolarState& s);
// Jacobian of (dr, dq, dkappa) with respect to (r, q, kappa).
Eigen::Matrix3d polar_jacobian(const CglParams& p, const Frame& frame, const PolarState& s);
// Polar variables (r, q, kappa) of a point v with derivative dv.
PolarState to_polar(const Vec2& v, const Vec2& dv);

// Jacobian at (r_inf, 0, 0); requires two stable and one unstable eigenvalue.
// rate = smallest |Re| among stable eigenvalues.
LinearizationData plus_linearization(const CglParams& p, const Frame& frame);

double decay_rate(const LinearizationData& minus, const LinearizationData& plus);

struct Profile {
  Grid1D grid;
  Eigen::VectorXd v;
  Eigen::VectorXd dv;
  Frame frame;
  double mu_star = 0.0;
  int newton_iterations = 0;
  double residual = 0.0;
  std::vector<std::string> notes;

  Vec2 at(int i) const { return Vec2(v[2 * i], v[2 * i + 1]); }
  Vec2 d_at(int i) const { return Vec2(dv[2 * i], dv[2 * i + 1]); }
};

struct ProfileGuess {
  double c0 = 1.0;
  Grid1D grid;
  // samples on grid; a tanh amplitude guess is used when absent
  std::optional<Eigen::VectorXd> v0;
};

struct ProfileSolveOptions {
  double tol = 1e-10;
  int max_iter = 30;
};

// Interior residual A v_xx + c v_x + S_omega v + f(v) (central differences) at nodes 1..n-2.
Eigen::VectorXd profile_residual(const CglParams& p, const Frame& frame, const Grid1D& grid,
                                 const Eigen::VectorXd& v);

Profile solve_profile(const CglParams& p, const RestState& rest, const ProfileGuess& guess,
                      const ProfileSolveOptions& opt = {});

struct SimulationEstimate {
  double c_est = 0.0;
  double omega_est = 0.0;
  // last snapshot shifted so that the front sits at x = 0 and rotated so that
  // the far-field value is (|v_inf|, 0)
  ExtendedState snapshot;
};
SimulationEstimate profile_from_simulation(const TimeSeries& series);

// Log-linear fits of |v| on the left and |v - v_inf| on the right tail.
struct TailRates {
  double left = 0.0;
  double right = 0.0;
};
TailRates tail_rates(const Profile& prof);

struct PipelineOptions {
  double dt = 0.01;
  double t_probe = 20.0;
  double t_settle = 40.0;
  double amplitude = 0.9;
  double mu_hat = 0.2;
};
// Simulation in two frames to estimate (c, profile), followed by solve_profile.
Profile compute_profile(const CglParams& p, const RestState& rest, const Grid1D& grid,
                        const PipelineOptions& opt = {});

}  // namespace tof
