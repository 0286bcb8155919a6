#pragma once

#include "tof/banded.hpp"
#include "tof/cgl_model.hpp"
#include "tof/common.hpp"
#include "tof/weight.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tof {

enum class FrameKind { lab, comoving };
enum class Scheme { imex_euler, imex_bdf2 };

// For the lab frame the stepper runs with c = 0 in a frame rotating at the rest
// frequency (exact change of variables); observables are reported in the lab.
struct SimFrame {
  FrameKind kind = FrameKind::comoving;
  double c = 0.0;
  double omega = 0.0;
};

struct SimConfig {
  Grid1D grid;
  double dt = 0.01;
  double t_end = 10.0;
  SimFrame frame;
  WeightSpec weight;
  int snapshot_stride = 100;
  Scheme scheme = Scheme::imex_bdf2;
};

// Explicit additive forcing F(t) in the extended equation.
using Forcing = std::function<ExtendedState(double t)>;

// IMEX stepper for v_t = A v_xx + c v_x + S_omega v + f(v), rho_t = S_omega rho + f(rho),
// Neumann at x_min and v(x_max) = rho. The implicit factorizations are cached.
class ImexStepper {
 public:
  ImexStepper(const CglParams& p, const Grid1D& grid, double c, double omega, double dt,
              Scheme scheme = Scheme::imex_bdf2);
  // Advances from time t; the first step (or the first after reset) is IMEX-Euler.
  ExtendedState step(const ExtendedState& s, double t = 0.0, const Forcing* forcing = nullptr);
  void reset() { have_history_ = false; }
  double dt() const { return dt_; }

 private:
  Eigen::VectorXd explicit_part(const Eigen::VectorXd& y, double t, const Forcing* forcing) const;

  CglParams p_;
  Grid1D grid_;
  double dt_;
  Scheme scheme_;
  BandedLU<double> lu_euler_, lu_bdf2_;
  bool have_history_ = false;
  Eigen::VectorXd y_prev_, n_prev_;
};

// Single IMEX-Euler step.
ExtendedState imex_step(const ExtendedState& s, const CglParams& p, const Grid1D& grid, double c, double omega,
                        double dt);

// A v_xx + c v_x + S_omega v + f(v) and S_omega rho + f(rho), in coordinates.
Eigen::VectorXd extended_rhs(const CglParams& p, const Grid1D& grid, double c, double omega,
                             const ExtendedState& s);

struct Observables {
  std::optional<double> front_pos;
  double phase = 0.0;
};
// Level set |v| = level (first crossing from the left) and far-field phase at x_max.
Observables observe(const ExtendedState& s, const Grid1D& grid, double level);

struct TimeSeries {
  Grid1D grid;
  SimFrame frame;
  double stepper_c = 0.0;
  double stepper_omega = 0.0;
  double level = 0.0;
  std::vector<double> times;
  std::vector<ExtendedState> snapshots;
  // lab-frame observables; NaN front position when no front exists
  std::vector<double> front_pos;
  std::vector<double> phase;
  std::vector<double> norm_x1;
  int steps = 0;
};

TimeSeries simulate(const CglParams& p, const SimConfig& cfg, const ExtendedState& init,
                    const Forcing* forcing = nullptr);

struct RateSummary {
  double c_est = 0.0;
  double omega_est = 0.0;
  // relative change between fits on the two quarters of the second half
  double c_drift = 0.0;
  double omega_drift = 0.0;
  double c_fit_residual = 0.0;
  bool has_front = false;
};
// Linear fits over the second half of the series. omega_est is always available;
// c_est needs a front in every used snapshot.
RateSummary observables(const TimeSeries& series);

// v_hat(x - x0) * amplitude * (1, 0) with rho at the far-field value.
ExtendedState sigmoid_state(const Grid1D& grid, const WeightSpec& w, double amplitude, double x0);
// v identically equal to v_inf, rho = v_inf.
ExtendedState bound_state(const Grid1D& grid, const Vec2& v_inf);

}  // namespace tof
