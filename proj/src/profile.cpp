#include "tof/profile.hpp"

#include "tof/spline.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tof {

namespace {

void classify(LinearizationData& d, const char* which) {
  d.stable_dim = d.unstable_dim = 0;
  for (int k = 0; k < d.eigenvalues.size(); ++k) {
    const double re = d.eigenvalues[k].real();
    if (std::abs(re) < tol_hyp) {
      std::ostringstream os;
      os << which << " equilibrium is not hyperbolic (eigenvalue " << d.eigenvalues[k] << ")";
      throw Error(ErrorKind::numerical, "non-hyperbolic", os.str());
    }
    if (re < 0) ++d.stable_dim;
    else ++d.unstable_dim;
  }
}

}  // namespace

LinearizationData minus_linearization(const CglParams& p, const Frame& frame) {
  const Mat2 Ai = p.A_inv();
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J.block<2, 2>(0, 2) = Mat2::Identity();
  J.block<2, 2>(2, 0) = -Ai * (s_omega(frame.omega) + df_jac(p, Vec2::Zero()));
  J.block<2, 2>(2, 2) = -frame.c * Ai;
  LinearizationData d;
  d.jacobian = J;
  d.eigenvalues = Eigen::EigenSolver<Eigen::Matrix4d>(J).eigenvalues();
  classify(d, "left");
  d.rate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k)
    if (d.eigenvalues[k].real() > 0) d.rate = std::min(d.rate, d.eigenvalues[k].real());
  return d;
}

PolarRhs polar_rhs(const CglParams& p, const Frame& frame, const PolarState& s) {
  if (!(s.r > 0.0)) throw Error(ErrorKind::domain, "polar-domain", "polar system needs r > 0");
  const Complex2 g = g_eval(p, s.r * s.r, 0);
  const Vec2 t = p.A_inv() * Vec2(frame.c * s.kappa + g.re, frame.c * s.q + frame.omega + g.im);
  PolarRhs out;
  out.dr = s.r * s.kappa;
  out.dkappa = s.q * s.q - s.kappa * s.kappa - t[0];
  out.dq = -2.0 * s.kappa * s.q - t[1];
  return out;
}

Eigen::Matrix3d polar_jacobian(const CglParams& p, const Frame& frame, const PolarState& s) {
  const Complex2 gp = g_eval(p, s.r * s.r, 1);
  const Mat2 Ai = p.A_inv();
  const Vec2 tr = Ai * Vec2(2.0 * s.r * gp.re, 2.0 * s.r * gp.im);
  const Vec2 tq = Ai * Vec2(0.0, frame.c);
  const Vec2 tk = Ai * Vec2(frame.c, 0.0);
  Eigen::Matrix3d J;
  J << s.kappa, 0.0, s.r,
      -tr[1], -2.0 * s.kappa - tq[1], -2.0 * s.q - tk[1],
      -tr[0], 2.0 * s.q - tq[0], -2.0 * s.kappa - tk[0];
  return J;
}

PolarState to_polar(const Vec2& v, const Vec2& dv) {
  const double r2 = v.squaredNorm();
  return {std::sqrt(r2), (v[0] * dv[1] - v[1] * dv[0]) / r2, v.dot(dv) / r2};
}

LinearizationData plus_linearization(const CglParams& p, const Frame& frame) {
  LinearizationData d;
  d.jacobian = polar_jacobian(p, frame, {frame.v_inf.norm(), 0.0, 0.0});
  d.eigenvalues = Eigen::EigenSolver<Eigen::Matrix3d>(Eigen::Matrix3d(d.jacobian)).eigenvalues();
  classify(d, "right");
  if (d.stable_dim != 2 || d.unstable_dim != 1)
    throw Error(ErrorKind::numerical, "plus-dimensions", "right equilibrium needs 2 stable and 1 unstable directions");
  d.rate = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k)
    if (d.eigenvalues[k].real() < 0) d.rate = std::min(d.rate, -d.eigenvalues[k].real());
  return d;
}

double decay_rate(const LinearizationData& minus, const LinearizationData& plus) {
  return std::min(minus.rate, plus.rate);
}

Eigen::VectorXd profile_residual(const CglParams& p, const Frame& frame, const Grid1D& grid,
                                 const Eigen::VectorXd& v) {
  const int n = grid.n;
  const double h = grid.h();
  const Mat2 A = p.A(), S = s_omega(frame.omega);
  Eigen::VectorXd res(2 * (n - 2));
  for (int i = 1; i < n - 1; ++i) {
    const Vec2 vm = v.segment<2>(2 * (i - 1)), v0 = v.segment<2>(2 * i), vp = v.segment<2>(2 * (i + 1));
    res.segment<2>(2 * (i - 1)) =
        A * (vp - 2.0 * v0 + vm) / (h * h) + frame.c * (vp - vm) / (2.0 * h) + S * v0 + f_eval(p, v0);
  }
  return res;
}

namespace {

struct BoundaryData {
  Eigen::Matrix<double, 2, 4> left;  // rows annihilating the left stable subspace
  Eigen::Vector3d right;             // left eigenvector of the unstable right direction
};

BoundaryData boundary_data(const CglParams& p, const Frame& frame) {
  BoundaryData b;
  const LinearizationData m = minus_linearization(p, frame);
  Eigen::EigenSolver<Eigen::Matrix4d> es(Eigen::Matrix4d(m.jacobian));
  const Eigen::Matrix4cd W = es.eigenvectors().inverse();
  Eigen::MatrixXd rows(0, 4);
  for (int k = 0; k < 4; ++k) {
    if (es.eigenvalues()[k].real() < 0) {
      rows.conservativeResize(rows.rows() + 2, 4);
      rows.row(rows.rows() - 2) = W.row(k).real();
      rows.row(rows.rows() - 1) = W.row(k).imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  b.left = svd.matrixV().leftCols(2).transpose();
  const LinearizationData pl = plus_linearization(p, frame);
  Eigen::EigenSolver<Eigen::Matrix3d> ep(Eigen::Matrix3d(pl.jacobian));
  const Eigen::Matrix3cd Wp = ep.eigenvectors().inverse();
  int ku = 0;
  for (int k = 1; k < 3; ++k)
    if (ep.eigenvalues()[k].real() > ep.eigenvalues()[ku].real()) ku = k;
  b.right = Wp.row(ku).real().transpose();
  b.right /= b.right.norm();
  return b;
}

struct NewtonSystem {
  Eigen::VectorXd res;
  Eigen::SparseMatrix<double> jac;
};

NewtonSystem newton_system(const CglParams& p, const RestState& rest, const Grid1D& grid, const Eigen::VectorXd& v,
                           double c, int j_mid, double theta) {
  const int n = grid.n, N = 2 * n + 1;
  const double h = grid.h();
  const Frame frame{c, rest.omega, rest.v_inf};
  const Mat2 A = p.A(), S = s_omega(rest.omega), I = Mat2::Identity();
  const BoundaryData bd = boundary_data(p, frame);
  NewtonSystem sys;
  sys.res = Eigen::VectorXd::Zero(N);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 14 + 64);
  auto seg = [&](int i) { return Vec2(v.segment<2>(2 * i)); };

  // left: projection of (v, v') onto the stable left eigenvectors vanishes
  const Vec2 d0 = (-3.0 * seg(0) + 4.0 * seg(1) - seg(2)) / (2.0 * h);
  Eigen::Vector4d w0;
  w0 << seg(0), d0;
  sys.res.segment<2>(0) = bd.left * w0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      trip.emplace_back(a, b, bd.left(a, b) + bd.left(a, 2 + b) * (-3.0 / (2.0 * h)));
      trip.emplace_back(a, 2 + b, bd.left(a, 2 + b) * (4.0 / (2.0 * h)));
      trip.emplace_back(a, 4 + b, bd.left(a, 2 + b) * (-1.0 / (2.0 * h)));
    }

  // interior
  const Mat2 Jm = A / (h * h) - c / (2.0 * h) * I, Jp = A / (h * h) + c / (2.0 * h) * I;
  for (int i = 1; i < n - 1; ++i) {
    const Vec2 vm = seg(i - 1), v0 = seg(i), vp = seg(i + 1);
    const Vec2 vx = (vp - vm) / (2.0 * h);
    sys.res.segment<2>(2 * i) = A * (vp - 2.0 * v0 + vm) / (h * h) + c * vx + S * v0 + f_eval(p, v0);
    const Mat2 J0 = -2.0 * A / (h * h) + S + df_jac(p, v0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        trip.emplace_back(2 * i + a, 2 * i + b, J0(a, b));
        trip.emplace_back(2 * i + a, 2 * (i - 1) + b, Jm(a, b));
        trip.emplace_back(2 * i + a, 2 * (i + 1) + b, Jp(a, b));
      }
      trip.emplace_back(2 * i + a, N - 1, vx[a]);
    }
  }

  // right: no component along the unstable polar direction at x_max
  const int m = n - 1;
  const Vec2 vN = seg(m), dN = (3.0 * seg(m) - 4.0 * seg(m - 1) + seg(m - 2)) / (2.0 * h);
  const PolarState ps = to_polar(vN, dN);
  const Eigen::Vector3d pv(ps.r - rest.r_inf(), ps.q, ps.kappa);
  sys.res[2 * n - 2] = bd.right.dot(pv);
  {
    const double r2 = vN.squaredNorm(), r = std::sqrt(r2), r4 = r2 * r2;
    const double cross = vN[0] * dN[1] - vN[1] * dN[0], dot = vN.dot(dN);
    Eigen::Matrix<double, 3, 2> dv, dd;
    dv.row(0) = (vN / r).transpose();
    dd.row(0).setZero();
    dv(1, 0) = dN[1] / r2 - 2.0 * vN[0] * cross / r4;
    dv(1, 1) = -dN[0] / r2 - 2.0 * vN[1] * cross / r4;
    dd(1, 0) = -vN[1] / r2;
    dd(1, 1) = vN[0] / r2;
    for (int b = 0; b < 2; ++b) {
      dv(2, b) = dN[b] / r2 - 2.0 * vN[b] * dot / r4;
      dd(2, b) = vN[b] / r2;
    }
    const Eigen::RowVector2d gv = bd.right.transpose() * dv, gd = bd.right.transpose() * dd;
    for (int b = 0; b < 2; ++b) {
      trip.emplace_back(2 * n - 2, 2 * m + b, gv[b] + gd[b] * 3.0 / (2.0 * h));
      trip.emplace_back(2 * n - 2, 2 * (m - 1) + b, -gd[b] * 4.0 / (2.0 * h));
      trip.emplace_back(2 * n - 2, 2 * (m - 2) + b, gd[b] / (2.0 * h));
    }
  }
  // rotation: Im of the far-field value vanishes
  sys.res[2 * n - 1] = vN[1];
  trip.emplace_back(2 * n - 1, 2 * m + 1, 1.0);
  // translation: |v|^2 at x = 0 equals y_inf / 4
  const Vec2 va = seg(j_mid), vb = seg(j_mid + 1);
  sys.res[2 * n] = (1.0 - theta) * va.squaredNorm() + theta * vb.squaredNorm() - rest.y_inf / 4.0;
  for (int b = 0; b < 2; ++b) {
    trip.emplace_back(2 * n, 2 * j_mid + b, 2.0 * (1.0 - theta) * va[b]);
    trip.emplace_back(2 * n, 2 * (j_mid + 1) + b, 2.0 * theta * vb[b]);
  }
  sys.jac.resize(N, N);
  sys.jac.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

}  // namespace

Profile solve_profile(const CglParams& p, const RestState& rest, const ProfileGuess& guess,
                      const ProfileSolveOptions& opt) {
  const Grid1D grid = guess.grid;
  const int n = grid.n;
  if (!(grid.x_min < 0.0 && grid.x_max > 0.0))
    throw Error(ErrorKind::config, "grid", "profile grid must contain x = 0 in its interior");
  const double h = grid.h();
  const int j_mid = std::min(n - 2, static_cast<int>(std::floor((0.0 - grid.x_min) / h)));
  const double theta = (0.0 - grid.x(j_mid)) / h;

  Eigen::VectorXd v;
  if (guess.v0) {
    v = *guess.v0;
    if (v.size() != 2 * n) throw Error(ErrorKind::config, "guess", "profile guess has wrong size");
  } else {
    v.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      v[2 * i] = rest.r_inf() * (0.5 * std::tanh(0.5 * grid.x(i)) + 0.5);
      v[2 * i + 1] = 0.0;
    }
  }
  double c = guess.c0;
  int iters = 0;
  double res_norm = 0.0;
  for (;;) {
    NewtonSystem sys = newton_system(p, rest, grid, v, c, j_mid, theta);
    res_norm = sys.res.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res_norm)) throw Error(ErrorKind::numerical, "newton-divergence", "profile Newton produced non-finite residual");
    if (res_norm <= opt.tol) break;
    if (iters >= opt.max_iter) {
      std::ostringstream os;
      os << "profile Newton did not converge in " << opt.max_iter << " iterations, last residual " << res_norm;
      throw Error(ErrorKind::numerical, "newton-divergence", os.str());
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(sys.jac);
    lu.factorize(sys.jac);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::numerical, "newton-divergence", "singular Jacobian in profile Newton");
    const Eigen::VectorXd du = lu.solve(-sys.res);
    v += du.head(2 * n);
    c += du[2 * n];
    ++iters;
  }
  Profile prof;
  prof.grid = grid;
  prof.v = v;
  prof.dv = differentiate_field(grid, v);
  prof.frame = Frame{c, rest.omega, rest.v_inf};
  prof.newton_iterations = iters;
  prof.residual = res_norm;
  if (!(c > 0.0)) prof.notes.push_back("front speed is not positive");
  if (!(v[2 * (n - 1)] > 0.0)) prof.notes.push_back("far-field value has non-positive real part");
  const LinearizationData lm = minus_linearization(p, prof.frame);
  const LinearizationData lp = plus_linearization(p, prof.frame);
  prof.mu_star = decay_rate(lm, lp);
  const double tail_left = prof.at(0).norm(), tail_right = (prof.at(n - 1) - rest.v_inf).norm();
  if (tail_left > 1e-6 || tail_right > 1e-6) {
    std::ostringstream os;
    os << "truncation too short: |v(x_min)| = " << tail_left << ", |v(x_max) - v_inf| = " << tail_right;
    prof.notes.push_back(os.str());
  }
  return prof;
}

SimulationEstimate profile_from_simulation(const TimeSeries& series) {
  const RateSummary rs = observables(series);
  if (!rs.has_front) throw Error(ErrorKind::numerical, "no-front", "no level-set crossing in the second half of the run");
  if (rs.c_fit_residual > 10.0 * series.grid.h())
    throw Error(ErrorKind::numerical, "no-front", "front position is not linear in time");
  SimulationEstimate est;
  est.c_est = rs.c_est;
  est.omega_est = rs.omega_est;
  const ExtendedState& last = series.snapshots.back();
  const Observables o = observe(last, series.grid, series.level);
  ExtendedState s(series.grid.n);
  s.v = shift_field(series.grid, last.v, -*o.front_pos);
  const Mat2 R = rotation(-o.phase);
  for (int i = 0; i < series.grid.n; ++i) s.set(i, R * s.at(i));
  s.rho = R * last.rho;
  est.snapshot = s;
  return est;
}

TailRates tail_rates(const Profile& prof) {
  const Grid1D& g = prof.grid;
  const double r_inf = prof.frame.v_inf.norm();
  std::vector<double> xl, yl, xr, yr;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.x(i);
    if (x < 0.0) {
      const double a = prof.at(i).norm() / r_inf;
      if (a > 1e-9 && a < 1e-4) {
        xl.push_back(x);
        yl.push_back(std::log(a));
      }
    } else {
      const double a = (prof.at(i) - prof.frame.v_inf).norm() / r_inf;
      if (a > 1e-9 && a < 1e-4) {
        xr.push_back(x);
        yr.push_back(std::log(a));
      }
    }
  }
  TailRates t;
  if (xl.size() >= 5) t.left = linear_fit(xl, yl).slope;
  if (xr.size() >= 5) t.right = -linear_fit(xr, yr).slope;
  return t;
}

Profile compute_profile(const CglParams& p, const RestState& rest, const Grid1D& grid, const PipelineOptions& opt) {
  SimConfig cfg;
  cfg.grid = grid;
  cfg.dt = opt.dt;
  cfg.weight = WeightSpec{0.0, opt.mu_hat};
  cfg.snapshot_stride = std::max(1, static_cast<int>(std::llround(0.5 / opt.dt)));
  cfg.frame = SimFrame{FrameKind::comoving, 0.0, rest.omega};
  cfg.t_end = opt.t_probe;
  const ExtendedState init = sigmoid_state(grid, cfg.weight, opt.amplitude, 0.0);
  const TimeSeries probe = simulate(p, cfg, init);
  const SimulationEstimate e1 = profile_from_simulation(probe);
  // recentre and continue in a frame moving at the probed speed
  cfg.frame = SimFrame{FrameKind::comoving, e1.c_est, rest.omega};
  cfg.t_end = opt.t_settle;
  const TimeSeries settle = simulate(p, cfg, e1.snapshot);
  const SimulationEstimate e2 = profile_from_simulation(settle);
  ProfileGuess guess;
  guess.c0 = e2.c_est;
  guess.grid = grid;
  guess.v0 = e2.snapshot.v;
  return solve_profile(p, rest, guess);
}

}  // namespace tof
