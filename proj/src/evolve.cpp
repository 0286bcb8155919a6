#include "tof/evolve.hpp"

#include "tof/discrete.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tof {

ImexStepper::ImexStepper(const CglParams& p, const Grid1D& grid, double c, double omega, double dt, Scheme scheme)
    : p_(p), grid_(grid), dt_(dt), scheme_(scheme) {
  if (!(dt > 0.0)) throw Error(ErrorKind::config, "dt", "time step must be positive");
  if (!(p.alpha.re > 0.0)) throw Error(ErrorKind::assumption, "alpha", "alpha_re must be positive");
  const RealBand L = assemble_linear(p, grid, c, omega, nullptr, nullptr);
  lu_euler_ = BandedLU<double>(L.shifted(-dt, 1.0));
  if (scheme == Scheme::imex_bdf2) lu_bdf2_ = BandedLU<double>(L.shifted(-dt, 1.5));
}

Eigen::VectorXd ImexStepper::explicit_part(const Eigen::VectorXd& y, double t, const Forcing* forcing) const {
  Eigen::VectorXd N = nonlinear_coords(p_, y);
  if (forcing) N += to_coords((*forcing)(t));
  return N;
}

ExtendedState ImexStepper::step(const ExtendedState& s, double t, const Forcing* forcing) {
  const Eigen::VectorXd y = to_coords(s);
  const Eigen::VectorXd N = explicit_part(y, t, forcing);
  Eigen::VectorXd rhs;
  if (scheme_ == Scheme::imex_euler || !have_history_) {
    rhs = y + dt_ * N;
    lu_euler_.solve(rhs.data());
  } else {
    rhs = 2.0 * y - 0.5 * y_prev_ + dt_ * (2.0 * N - n_prev_);
    lu_bdf2_.solve(rhs.data());
  }
  if (!rhs.allFinite()) throw Error(ErrorKind::numerical, "blow-up", "non-finite values after time step");
  y_prev_ = y;
  n_prev_ = N;
  have_history_ = true;
  return from_coords(rhs, grid_.n);
}

ExtendedState imex_step(const ExtendedState& s, const CglParams& p, const Grid1D& grid, double c, double omega,
                        double dt) {
  ImexStepper st(p, grid, c, omega, dt, Scheme::imex_euler);
  return st.step(s);
}

Eigen::VectorXd extended_rhs(const CglParams& p, const Grid1D& grid, double c, double omega,
                             const ExtendedState& s) {
  const RealBand L = assemble_linear(p, grid, c, omega, nullptr, nullptr);
  const Eigen::VectorXd y = to_coords(s);
  Eigen::VectorXd out(y.size());
  L.multiply(y.data(), out.data());
  return out + nonlinear_coords(p, y);
}

Observables observe(const ExtendedState& s, const Grid1D& grid, double level) {
  Observables o;
  const Vec2 far = s.at(grid.n - 1);
  o.phase = std::atan2(far[1], far[0]);
  double prev = s.at(0).norm();
  if (prev >= level) return o;
  for (int i = 1; i < grid.n; ++i) {
    const double a = s.at(i).norm();
    if (a >= level) {
      o.front_pos = grid.x(i - 1) + (level - prev) / (a - prev) * grid.h();
      return o;
    }
    prev = a;
  }
  return o;
}

TimeSeries simulate(const CglParams& p, const SimConfig& cfg, const ExtendedState& init, const Forcing* forcing) {
  if (init.nodes() != cfg.grid.n) throw Error(ErrorKind::config, "grid-mismatch", "initial state grid mismatch");
  if (!(cfg.t_end >= 0.0)) throw Error(ErrorKind::config, "t_end", "t_end must be non-negative");
  if (cfg.snapshot_stride < 1) throw Error(ErrorKind::config, "snapshot_stride", "snapshot_stride must be >= 1");
  TimeSeries ts;
  ts.grid = cfg.grid;
  ts.frame = cfg.frame;
  std::optional<RestState> rest;
  try {
    rest = rest_state(p);
  } catch (const Error&) {
  }
  ts.level = rest ? 0.5 * rest->r_inf() : std::numeric_limits<double>::quiet_NaN();
  if (cfg.frame.kind == FrameKind::lab) {
    ts.stepper_c = 0.0;
    ts.stepper_omega = rest ? rest->omega : 0.0;
  } else {
    ts.stepper_c = cfg.frame.c;
    ts.stepper_omega = cfg.frame.omega;
  }
  ImexStepper stepper(p, cfg.grid, ts.stepper_c, ts.stepper_omega, cfg.dt, cfg.scheme);
  ExtendedState s = init;
  // start from a state satisfying the coupling v(x_max) = rho
  s.set(cfg.grid.n - 1, s.rho);
  const int nsteps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
  double unwrapped = 0.0, last_raw = 0.0;
  auto record = [&](int k) {
    const double t = k * cfg.dt;
    const Observables o = observe(s, cfg.grid, ts.level);
    if (ts.times.empty()) {
      unwrapped = o.phase;
    } else {
      double d = o.phase - last_raw;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
      unwrapped += d;
    }
    last_raw = o.phase;
    ts.times.push_back(t);
    ts.snapshots.push_back(s);
    ts.front_pos.push_back(o.front_pos ? *o.front_pos + ts.stepper_c * t : std::numeric_limits<double>::quiet_NaN());
    ts.phase.push_back(unwrapped - ts.stepper_omega * t);
    ts.norm_x1.push_back(norm_X1(cfg.weight, cfg.grid, s));
  };
  record(0);
  for (int k = 1; k <= nsteps; ++k) {
    s = stepper.step(s, (k - 1) * cfg.dt, forcing);
    if (k % cfg.snapshot_stride == 0 || k == nsteps) record(k);
  }
  ts.steps = nsteps;
  return ts;
}

RateSummary observables(const TimeSeries& series) {
  RateSummary r;
  const std::size_t m = series.times.size();
  if (m < 4) throw Error(ErrorKind::numerical, "short-series", "need at least four samples for rate fits");
  const double t_end = series.times.back();
  auto fit_range = [&](const std::vector<double>& y, double a, double b, bool& ok) {
    std::vector<double> tt, yy;
    ok = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (series.times[k] < a - 1e-12 || series.times[k] > b + 1e-12) continue;
      if (!std::isfinite(y[k])) ok = false;
      tt.push_back(series.times[k]);
      yy.push_back(y[k]);
    }
    if (tt.size() < 2) ok = false;
    return ok ? linear_fit(tt, yy) : LinearFit{};
  };
  bool ok_p = false, ok_p1 = false, ok_p2 = false;
  const LinearFit ph = fit_range(series.phase, 0.5 * t_end, t_end, ok_p);
  const LinearFit ph1 = fit_range(series.phase, 0.5 * t_end, 0.75 * t_end, ok_p1);
  const LinearFit ph2 = fit_range(series.phase, 0.75 * t_end, t_end, ok_p2);
  if (!ok_p) throw Error(ErrorKind::numerical, "short-series", "phase fit failed");
  r.omega_est = -ph.slope;
  r.omega_drift = (ok_p1 && ok_p2) ? std::abs(ph1.slope - ph2.slope) / std::max(std::abs(ph.slope), 1e-300) : 0.0;
  bool ok_c = false, ok_c1 = false, ok_c2 = false;
  const LinearFit fc = fit_range(series.front_pos, 0.5 * t_end, t_end, ok_c);
  const LinearFit fc1 = fit_range(series.front_pos, 0.5 * t_end, 0.75 * t_end, ok_c1);
  const LinearFit fc2 = fit_range(series.front_pos, 0.75 * t_end, t_end, ok_c2);
  r.has_front = ok_c && ok_c1 && ok_c2;
  if (r.has_front) {
    r.c_est = fc.slope;
    r.c_fit_residual = fc.max_residual;
    r.c_drift = std::abs(fc1.slope - fc2.slope) / std::max(std::abs(fc.slope), 1e-300);
  }
  return r;
}

ExtendedState sigmoid_state(const Grid1D& grid, const WeightSpec& w, double amplitude, double x0) {
  ExtendedState s(grid.n);
  for (int i = 0; i < grid.n; ++i) s.set(i, Vec2(amplitude * w.vhat(grid.x(i) - x0), 0.0));
  s.rho = s.at(grid.n - 1);
  return s;
}

ExtendedState bound_state(const Grid1D& grid, const Vec2& v_inf) {
  ExtendedState s(grid.n);
  for (int i = 0; i < grid.n; ++i) s.set(i, v_inf);
  s.rho = v_inf;
  return s;
}

}  // namespace tof
