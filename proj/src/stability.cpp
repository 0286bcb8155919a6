#include "tof/stability.hpp"

#include "tof/evolve.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tof {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<UniformSpline, 2> component_splines(const Grid1D& grid, const Eigen::VectorXd& v) {
  std::vector<double> a(grid.n), b(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    a[i] = v[2 * i];
    b[i] = v[2 * i + 1];
  }
  return {UniformSpline(grid, std::move(a)), UniformSpline(grid, std::move(b))};
}

Eigen::VectorXd apply_pairs(const Mat2& M, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (Eigen::Index k = 0; k + 1 < y.size(); k += 2) out.segment<2>(k) = M * y.segment<2>(k);
  return out;
}

}  // namespace

double canonical_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double metric(const GroupElement& g) { return std::abs(canonical_angle(g.theta)) + std::abs(g.tau); }

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  return {canonical_angle(a.theta + b.theta), a.tau + b.tau};
}

GroupElement difference(const GroupElement& a, const GroupElement& b) { return {a.theta - b.theta, a.tau - b.tau}; }

ExtendedState act(const GroupElement& g, const Grid1D& grid, const ExtendedState& s) {
  const Mat2 R = rotation(-g.theta);
  ExtendedState out(grid.n);
  const Eigen::VectorXd shifted = shift_field(grid, s.v, g.tau);
  for (int i = 0; i < grid.n; ++i) out.set(i, R * Vec2(shifted[2 * i], shifted[2 * i + 1]));
  out.rho = R * s.rho;
  return out;
}

GroupOrbit::GroupOrbit(const Discretization& d, const SpectralData& sd)
    : d_(d),
      sd_(sd),
      prof_(component_splines(d.grid, d.profile.v)),
      phi1_(component_splines(d.grid, d.state(sd.phi1).v)),
      phi2_(component_splines(d.grid, d.state(sd.phi2).v)) {}

ExtendedState GroupOrbit::profile_state() const {
  ExtendedState s(d_.grid.n);
  s.v = d_.profile.v;
  s.rho = d_.profile.frame.v_inf;
  return s;
}

Eigen::VectorXd GroupOrbit::shifted_rotated(const std::array<UniformSpline, 2>& sp, const Vec2& far,
                                            const GroupElement& g, bool derivative) const {
  const Mat2 R = rotation(-g.theta);
  const Grid1D& grid = d_.grid;
  ExtendedState s(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i) - g.tau;
    const Vec2 u = derivative ? Vec2(sp[0].derivative(x), sp[1].derivative(x)) : Vec2(sp[0](x), sp[1](x));
    s.set(i, R * u);
  }
  s.rho = R * far;
  return d_.coords(s);
}

Eigen::VectorXd GroupOrbit::orbit_point(const GroupElement& g) const {
  return shifted_rotated(prof_, d_.profile.frame.v_inf, g, false);
}

Eigen::VectorXd GroupOrbit::d_theta(const GroupElement& g) const { return apply_pairs(-s1(), orbit_point(g)); }

Eigen::VectorXd GroupOrbit::d_tau(const GroupElement& g) const {
  return -shifted_rotated(prof_, Vec2::Zero(), g, true);
}

Eigen::VectorXd GroupOrbit::acted_phi(int j, const GroupElement& g) const {
  if (j != 1 && j != 2) throw Error(ErrorKind::config, "index", "kernel vector index must be 1 or 2");
  const Eigen::VectorXd& phi = j == 1 ? sd_.phi1 : sd_.phi2;
  return shifted_rotated(j == 1 ? phi1_ : phi2_, phi.tail<2>(), g, false);
}

Eigen::Matrix2d GroupOrbit::m_matrix(const GroupElement& g) const {
  const Eigen::VectorXd a1 = acted_phi(1, g), a2 = acted_phi(2, g);
  Eigen::Matrix2d M;
  M << sd_.ell1.dot(a1), sd_.ell1.dot(a2), sd_.ell2.dot(a1), sd_.ell2.dot(a2);
  return M;
}

double GroupOrbit::norm_x1(const Eigen::VectorXd& y) const { return norm_X1(d_.weight, d_.grid, d_.state(y)); }

double GroupOrbit::norm_x(const Eigen::VectorXd& y) const { return std::sqrt(std::max(0.0, d_.inner(y, y))); }

Decomposition GroupOrbit::decompose(const Eigen::VectorXd& u, const GroupElement& guess) const {
  if (u.size() != d_.size()) throw Error(ErrorKind::config, "size", "state does not match the discretization");
  Decomposition out;
  GroupElement z = guess;
  bool converged = false;
  for (int it = 1; it <= 30; ++it) {
    const Eigen::VectorXd diff = u - orbit_point(z);
    const Eigen::Vector2d F(sd_.ell1.dot(diff), sd_.ell2.dot(diff));
    const Eigen::VectorXd dth = d_theta(z), dta = d_tau(z);
    Eigen::Matrix2d J;
    J << -sd_.ell1.dot(dth), -sd_.ell1.dot(dta), -sd_.ell2.dot(dth), -sd_.ell2.dot(dta);
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
    if (!lu.isInvertible()) throw Error(ErrorKind::numerical, "decomposition-failure", "singular Jacobian");
    const Eigen::Vector2d dz = lu.solve(-F);
    if (!dz.allFinite() || dz.norm() > 10.0)
      throw Error(ErrorKind::numerical, "decomposition-failure",
                  "Newton step too large; the state is not close to the group orbit");
    z.theta += dz[0];
    z.tau += dz[1];
    out.iterations = it;
    if (dz.norm() < 1e-13 * (1.0 + std::abs(z.tau))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorKind::numerical, "decomposition-failure", "Newton did not converge in 30 steps");
  out.z = z;
  out.w = u - orbit_point(z);
  const double wn = norm_x(out.w);
  if (wn > 0.0) {
    out.orth = {std::abs(sd_.ell1.dot(out.w)) / wn, std::abs(sd_.ell2.dot(out.w)) / wn};
  }
  return out;
}

Eigen::VectorXd GroupOrbit::remainder_rf(const GroupElement& z, const Eigen::VectorXd& w) const {
  const Eigen::VectorXd base = orbit_point(z);
  const Eigen::VectorXd star = d_.coords(profile_state());
  Eigen::VectorXd r(w.size());
  for (Eigen::Index k = 0; k + 1 < w.size(); k += 2) {
    const Vec2 b = base.segment<2>(k), wk = w.segment<2>(k);
    r.segment<2>(k) = f_eval(d_.params, b + wk) - f_eval(d_.params, b) - df_jac(d_.params, star.segment<2>(k)) * wk;
  }
  return r;
}

ReducedRhs GroupOrbit::reduced_rhs(const GroupElement& z, const Eigen::VectorXd& w) const {
  ReducedRhs out;
  const Eigen::VectorXd r = remainder_rf(z, w);
  const Eigen::VectorXd a1 = acted_phi(1, z), a2 = acted_phi(2, z);
  out.M << sd_.ell1.dot(a1), sd_.ell1.dot(a2), sd_.ell2.dot(a1), sd_.ell2.dot(a2);
  const Eigen::Vector2d y = out.M.fullPivLu().solve(Eigen::Vector2d(sd_.ell1.dot(r), sd_.ell2.dot(r)));
  out.tau_dot = -y[0];
  out.theta_dot = -y[1];
  Eigen::VectorXd rw = r - y[0] * a1 - y[1] * a2;
  rw -= project(sd_, rw);
  out.w_dot = d_.apply(w) + rw;
  return out;
}

double lipschitz_estimate(const GroupOrbit& orbit, const GroupElement& z, const Eigen::VectorXd& w, double dz) {
  const Eigen::VectorXd r0 = orbit.remainder_rf(z, w);
  const double a = orbit.norm_x1(orbit.remainder_rf({z.theta + dz, z.tau}, w) - r0);
  const double b = orbit.norm_x1(orbit.remainder_rf({z.theta, z.tau + dz}, w) - r0);
  return std::max(a, b) / std::abs(dz);
}

ExtendedState perturbation_state(const Discretization& d, const Perturbation& p) {
  return p.localized + template_state(d.weight, d.grid, p.rho0);
}

Perturbation bump_perturbation(const Discretization& d, double center, double width, const Vec2& dir, double norm,
                               const Vec2& rho0) {
  if (!(width > 0.0)) throw Error(ErrorKind::config, "perturbation", "bump width must be positive");
  Perturbation p;
  p.localized = ExtendedState(d.grid.n);
  for (int i = 0; i < d.grid.n; ++i) {
    const double x = d.grid.x(i);
    p.localized.set(i, std::exp(-(x - center) * (x - center) / (2.0 * width * width)) * dir);
  }
  const double n0 = norm_X1(d.weight, d.grid, p.localized);
  if (n0 > 0.0) p.localized *= norm / n0;
  p.rho0 = rho0;
  return p;
}

DecompositionTrace run_experiment(const GroupOrbit& orbit, const Perturbation& pert, const ExperimentConfig& cfg) {
  const Discretization& d = orbit.disc();
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || !(cfg.decompose_every > 0.0))
    throw Error(ErrorKind::config, "time", "need dt, t_end and decompose_every positive");
  DecompositionTrace tr;
  const ExtendedState v0 = perturbation_state(d, pert);
  tr.v0_norm = norm_X1(d.weight, d.grid, v0);
  if (tr.v0_norm > cfg.eps0)
    throw Error(ErrorKind::numerical, "decomposition-failure",
                "perturbation norm " + std::to_string(tr.v0_norm) + " exceeds eps0 = " + std::to_string(cfg.eps0));

  ExtendedState u = orbit.profile_state() + v0;
  u.set(d.grid.n - 1, u.rho);
  ImexStepper stepper(d.params, d.grid, d.profile.frame.c, d.profile.frame.omega, cfg.dt);
  const int steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
  const int stride = std::max(1, static_cast<int>(std::llround(cfg.decompose_every / cfg.dt)));

  GroupElement z;
  auto record = [&](int k) {
    const Decomposition dec = orbit.decompose(d.coords(u), z);
    z = dec.z;
    tr.times.push_back(k * cfg.dt);
    tr.z.push_back(z);
    tr.w_norm.push_back(orbit.norm_x1(dec.w));
    tr.orth.push_back(dec.orth);
    tr.max_newton = std::max(tr.max_newton, dec.iterations);
  };
  record(0);
  for (int k = 1; k <= steps; ++k) {
    u = stepper.step(u, (k - 1) * cfg.dt);
    if (!u.v.allFinite()) throw Error(ErrorKind::numerical, "blow-up", "non-finite state during the experiment");
    if (k % stride == 0) record(k);
  }

  const std::size_t m = tr.times.size();
  const double floor = 100.0 * cfg.solver_tol;
  if (tr.w_norm.front() <= floor) {
    // already on the group orbit: nothing to fit, the phase stays where it started
    tr.gamma_inf = tr.z.back();
    tr.gamma_ratio = tr.v0_norm > 0.0 ? metric(tr.gamma_inf) / tr.v0_norm : 0.0;
    tr.beta_fit = tr.gamma_rate = std::numeric_limits<double>::quiet_NaN();
    return tr;
  }
  std::size_t i1 = m, i2 = 0;
  for (std::size_t k = 0; k < m; ++k) {
    if (tr.w_norm[k] <= 0.5 * tr.w_norm[0]) {
      i1 = k;
      break;
    }
  }
  for (std::size_t k = m; k-- > 0;) {
    if (tr.w_norm[k] > floor) {
      i2 = k;
      break;
    }
  }
  if (i1 >= m || i2 < i1 + 2)
    throw Error(ErrorKind::assumption, "no-decay",
                "||w|| did not fall below half its initial value; final ratio " +
                    std::to_string(tr.w_norm.back() / tr.w_norm.front()));
  std::vector<double> t(tr.times.begin() + i1, tr.times.begin() + i2 + 1), lw;
  for (std::size_t k = i1; k <= i2; ++k) lw.push_back(std::log(tr.w_norm[k]));
  const LinearFit lf = linear_fit(t, lw);
  tr.t_fit_start = t.front();
  tr.t_fit_end = t.back();
  tr.beta_fit = -lf.slope;
  tr.beta_r2 = lf.r2;
  tr.K_fit = std::exp(lf.intercept) / tr.v0_norm;
  if (!(tr.beta_fit > 0.0))
    throw Error(ErrorKind::assumption, "no-decay", "fitted decay rate " + std::to_string(tr.beta_fit) + " <= 0");

  // final decade of the fit window
  std::size_t j0 = i2;
  while (j0 > i1 && tr.w_norm[j0 - 1] <= 10.0 * tr.w_norm[i2]) --j0;
  if (i2 - j0 < 2) j0 = i2 - std::min<std::size_t>(i2 - i1, 2);
  GroupElement avg;
  for (std::size_t k = j0; k <= i2; ++k) {
    avg.theta += tr.z[k].theta;
    avg.tau += tr.z[k].tau;
  }
  const double cnt = static_cast<double>(i2 - j0 + 1);
  tr.gamma_inf = {avg.theta / cnt, avg.tau / cnt};
  tr.gamma_ratio = metric(tr.gamma_inf) / tr.v0_norm;

  std::vector<double> tg, lg;
  for (std::size_t k = i1; k < j0; ++k) {
    const double e = metric(difference(tr.z[k], tr.gamma_inf));
    if (e > 0.0) {
      tg.push_back(tr.times[k]);
      lg.push_back(std::log(e));
    }
  }
  tr.gamma_rate = tg.size() >= 3 ? -linear_fit(tg, lg).slope : std::numeric_limits<double>::quiet_NaN();
  return tr;
}

ReducedComparison compare_reduced_direct(const GroupOrbit& orbit, const ExtendedState& u0, double t_end, double dt,
                                         double sample_every) {
  const Discretization& d = orbit.disc();
  if (!(dt > 0.0) || !(t_end > 0.0) || !(sample_every > 0.0))
    throw Error(ErrorKind::config, "time", "need dt, t_end and sample_every positive");
  ReducedComparison out;
  ExtendedState u = u0;
  u.set(d.grid.n - 1, u.rho);
  ImexStepper stepper(d.params, d.grid, d.profile.frame.c, d.profile.frame.omega, dt);

  const Decomposition dec = orbit.decompose(d.coords(u));
  GroupElement z = dec.z;
  Eigen::VectorXd w = dec.w;
  const BandedLU<double> lu1(d.L.shifted(-dt, 1.0)), lu2(d.L.shifted(-dt, 1.5));
  const Eigen::VectorXd star = d.coords(orbit.profile_state());

  const int steps = static_cast<int>(std::llround(t_end / dt));
  const int stride = std::max(1, static_cast<int>(std::llround(sample_every / dt)));
  Eigen::VectorXd w_prev, n_prev;
  Eigen::Vector2d zdot_prev = Eigen::Vector2d::Zero();
  GroupElement z_prev;
  for (int k = 1; k <= steps; ++k) {
    u = stepper.step(u, (k - 1) * dt);

    const ReducedRhs rhs = orbit.reduced_rhs(z, w);
    const Eigen::VectorXd nl = rhs.w_dot - d.apply(w);
    const Eigen::Vector2d zdot(rhs.theta_dot, rhs.tau_dot);
    Eigen::VectorXd next;
    GroupElement z_next;
    if (k == 1) {
      next = w + dt * nl;
      lu1.solve(next.data());
      z_next = {z.theta + dt * zdot[0], z.tau + dt * zdot[1]};
    } else {
      next = 2.0 * w - 0.5 * w_prev + dt * (2.0 * nl - n_prev);
      lu2.solve(next.data());
      const Eigen::Vector2d e = 2.0 * zdot - zdot_prev;
      z_next = {(2.0 * z.theta - 0.5 * z_prev.theta + dt * e[0]) / 1.5,
                (2.0 * z.tau - 0.5 * z_prev.tau + dt * e[1]) / 1.5};
    }
    w_prev = w;
    n_prev = nl;
    zdot_prev = zdot;
    z_prev = z;
    w = next;
    z = z_next;

    if (k % stride == 0) {
      const Eigen::VectorXd ud = d.coords(u);
      const Eigen::VectorXd ur = orbit.orbit_point(z) + w;
      const double rel = orbit.norm_x1(ur - ud) / orbit.norm_x1(ud - star);
      out.times.push_back(k * dt);
      out.rel_error.push_back(rel);
      out.max_rel_error = std::max(out.max_rel_error, rel);
    }
  }
  return out;
}

}  // namespace tof
