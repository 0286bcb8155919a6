#include "tof/operator.hpp"

#include "tof/spline.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace tof {

namespace {

double rho_slot_weight(const Discretization& d) {
  if (d.bc != BoundaryScheme::coupled) return 1.0;
  const int last = d.grid.n - 1;
  const double t = 1.0 - d.vhat[last];
  return 1.0 + d.quad[last] * t * t;
}

template <typename V>
V t_apply(const Discretization& d, const V& y) {
  V u = y;
  const int nv = d.v_count();
  for (int i = 0; i < nv; ++i) u.template segment<2>(2 * i) -= d.vhat[i] * y.template tail<2>();
  return u;
}

template <typename V>
V t_inverse(const Discretization& d, const V& y) {
  V u = y;
  const int nv = d.v_count();
  for (int i = 0; i < nv; ++i) u.template segment<2>(2 * i) += d.vhat[i] * y.template tail<2>();
  return u;
}

template <typename V>
V tt_apply(const Discretization& d, const V& z) {
  V u = z;
  const int nv = d.v_count();
  for (int i = 0; i < nv; ++i) u.template tail<2>() -= d.vhat[i] * z.template segment<2>(2 * i);
  return u;
}

template <typename V>
V tt_inverse(const Discretization& d, const V& z) {
  V u = z;
  const int nv = d.v_count();
  for (int i = 0; i < nv; ++i) u.template tail<2>() += d.vhat[i] * z.template segment<2>(2 * i);
  return u;
}

Eigen::VectorXd diag_weights(const Discretization& d) {
  const int nv = d.v_count();
  Eigen::VectorXd w(d.size());
  for (int i = 0; i < nv; ++i) w.segment<2>(2 * i).setConstant(d.quad[i]);
  w.tail<2>().setConstant(rho_slot_weight(d));
  return w;
}

// Subspace iteration for the dominant eigenvalues of a linear map given by `op`.
struct RitzResult {
  std::vector<cplx> theta;
  std::vector<Eigen::VectorXcd> vectors;
  int iterations = 0;
  double max_residual = 0.0;
  bool stagnated = false;
};

template <typename Op>
RitzResult subspace_iteration(Op op, int N, int block, int count, double tol, int max_iter, unsigned seed) {
  block = std::min(block, N);
  count = std::min(count, block);
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd X(N, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < N; ++i) X(i, j) = nd(rng);
  X = Eigen::HouseholderQR<Eigen::MatrixXd>(X).householderQ() * Eigen::MatrixXd::Identity(N, block);
  Eigen::MatrixXd Y(N, block);
  std::vector<double> history;
  for (int it = 1; it <= max_iter; ++it) {
    for (int j = 0; j < block; ++j) Y.col(j) = op(Eigen::VectorXd(X.col(j)));
    const Eigen::MatrixXd H = X.transpose() * Y;
    Eigen::EigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
      throw Error(ErrorKind::numerical, "eig-nonconvergence", "Rayleigh-Ritz eigensolve failed");
    std::vector<int> order(block);
    for (int j = 0; j < block; ++j) order[j] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]); });
    bool done = true;
    RitzResult rr;
    for (int k = 0; k < count; ++k) {
      const int j = order[k];
      const cplx th = es.eigenvalues()[j];
      const Eigen::VectorXcd sv = es.eigenvectors().col(j);
      const Eigen::VectorXcd x = X.cast<cplx>() * sv;
      const Eigen::VectorXcd r = Y.cast<cplx>() * sv - th * x;
      const double res = r.norm() / (std::abs(th) * x.norm());
      rr.max_residual = std::max(rr.max_residual, res);
      if (res > tol) done = false;
      rr.theta.push_back(th);
      rr.vectors.push_back(x / x.norm());
    }
    history.push_back(rr.max_residual);
    // Ritz pairs of strongly non-normal clusters stall well above roundoff
    const bool stalled = it >= 100 && rr.max_residual < 1e-6 && rr.max_residual > 0.5 * history[it - 51];
    if (done || stalled) {
      rr.iterations = it;
      rr.stagnated = !done;
      return rr;
    }
    X = Eigen::HouseholderQR<Eigen::MatrixXd>(Y).householderQ() * Eigen::MatrixXd::Identity(N, block);
  }
  throw Error(ErrorKind::numerical, "eig-nonconvergence", "subspace iteration did not converge within the cap");
}

BandedLU<double> shifted_lu(const RealBand& M, double& shift) {
  try {
    return BandedLU<double>(M.shifted(1.0, -shift));
  } catch (const Error& e) {
    if (e.code() != "lu-singular") throw;
    shift += 1e-6;
    return BandedLU<double>(M.shifted(1.0, -shift));
  }
}

// W-orthonormal basis of the dominant two directions among the columns of R.
Eigen::MatrixXd w_basis(const Discretization& d, const Eigen::MatrixXd& R, int rank) {
  Eigen::MatrixXd WR(R.rows(), R.cols());
  for (int j = 0; j < R.cols(); ++j) WR.col(j) = d.gram(R.col(j));
  const Eigen::MatrixXd G = R.transpose() * WR;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
  const int m = static_cast<int>(R.cols());
  Eigen::MatrixXd Q(R.rows(), rank);
  for (int k = 0; k < rank; ++k) {
    const double lam = es.eigenvalues()[m - 1 - k];
    if (!(lam > 0.0)) throw Error(ErrorKind::numerical, "gram", "degenerate kernel basis");
    Q.col(k) = R * es.eigenvectors().col(m - 1 - k) / std::sqrt(lam);
  }
  return Q;
}

Eigen::MatrixXd real_span(const std::vector<Eigen::VectorXcd>& vs) {
  Eigen::MatrixXd R(vs.front().size(), 2 * vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k) {
    R.col(2 * k) = vs[k].real();
    R.col(2 * k + 1) = vs[k].imag();
  }
  return R;
}

}  // namespace

Eigen::VectorXd Discretization::apply(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(y.size());
  L.multiply(y.data(), out.data());
  return out;
}

Eigen::VectorXd Discretization::gram(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd D = diag_weights(*this);
  return tt_apply(*this, Eigen::VectorXd(D.cwiseProduct(t_apply(*this, y))));
}

Eigen::VectorXd Discretization::gram_solve(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd D = diag_weights(*this);
  return t_inverse(*this, Eigen::VectorXd(tt_inverse(*this, z).cwiseQuotient(D)));
}

Eigen::VectorXcd Discretization::b_apply(const Eigen::VectorXcd& y) const {
  const Eigen::VectorXcd D = diag_weights(*this).cwiseSqrt().cast<cplx>();
  return D.cwiseProduct(t_apply(*this, y));
}

Eigen::VectorXcd Discretization::b_inverse(const Eigen::VectorXcd& z) const {
  const Eigen::VectorXcd D = diag_weights(*this).cwiseSqrt().cast<cplx>();
  return t_inverse(*this, Eigen::VectorXcd(z.cwiseQuotient(D)));
}

Eigen::VectorXcd Discretization::bt_apply(const Eigen::VectorXcd& z) const {
  const Eigen::VectorXcd D = diag_weights(*this).cwiseSqrt().cast<cplx>();
  return tt_apply(*this, Eigen::VectorXcd(D.cwiseProduct(z)));
}

Eigen::VectorXcd Discretization::bt_inverse(const Eigen::VectorXcd& y) const {
  const Eigen::VectorXcd D = diag_weights(*this).cwiseSqrt().cast<cplx>();
  return tt_inverse(*this, y).cwiseQuotient(D);
}

Discretization assemble(const CglParams& p, const Profile& prof, const WeightSpec& w, const Grid1D& grid,
                        BoundaryScheme bc) {
  w.validate(prof.mu_star);
  if (grid.n < 3) throw Error(ErrorKind::config, "grid", "grid needs at least three nodes");
  const double slack = 1e-9 * prof.grid.h();
  if (grid.x_min < prof.grid.x_min - slack || grid.x_max > prof.grid.x_max + slack)
    throw Error(ErrorKind::config, "grid", "grid is not covered by the profile grid");
  Discretization d;
  d.params = p;
  d.grid = grid;
  d.weight = w;
  d.bc = bc;
  d.profile = prof;
  if (!grid.same_as(prof.grid)) {
    d.profile.grid = grid;
    d.profile.v = resample_field(prof.grid, prof.v, grid);
    d.profile.dv = differentiate_field(grid, d.profile.v);
  }
  const Frame& fr = prof.frame;
  const int nv = v_nodes(grid.n, bc);
  std::vector<Mat2> terms(nv);
  for (int i = 0; i < nv; ++i) terms[i] = df_jac(p, d.profile.at(i));
  const Mat2 rho_term = df_jac(p, fr.v_inf);
  d.L = assemble_linear(p, grid, fr.c, fr.omega, &terms, &rho_term, bc);
  d.E_omega = s_omega(fr.omega) + rho_term;
  const Eigen::VectorXd q = trapezoid_weights(grid);
  d.quad.resize(grid.n);
  d.vhat.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double e = w.eta(grid.x(i));
    d.quad[i] = q[i] * e * e;
    d.vhat[i] = w.vhat(grid.x(i));
  }
  return d;
}

Discretization assemble(const CglParams& p, const Profile& prof, const WeightSpec& w, BoundaryScheme bc) {
  return assemble(p, prof, w, prof.grid, bc);
}

Eigen::VectorXd analytic_phi1(const Discretization& d) {
  ExtendedState s(d.grid.n);
  s.v = d.profile.dv;
  s.rho.setZero();
  return d.coords(s);
}

Eigen::VectorXd analytic_phi2(const Discretization& d) {
  ExtendedState s(d.grid.n);
  for (int i = 0; i < d.grid.n; ++i) s.set(i, s1() * d.profile.at(i));
  s.rho = s1() * d.profile.frame.v_inf;
  return d.coords(s);
}

KernelResidual kernel_residuals(const Discretization& d) {
  auto rel = [&](const Eigen::VectorXd& phi) {
    const Eigen::VectorXd r = d.apply(phi);
    return std::sqrt(d.inner(r, r) / d.inner(phi, phi));
  };
  return {rel(analytic_phi1(d)), rel(analytic_phi2(d))};
}

EigResult eig_shift_invert(const RealBand& M, int count, const EigOptions& opt) {
  EigResult out;
  out.shift = opt.shift;
  const BandedLU<double> lu = shifted_lu(M, out.shift);
  auto op = [&](Eigen::VectorXd x) {
    lu.solve(x.data());
    return x;
  };
  const RitzResult rr =
      subspace_iteration(op, M.size(), std::max(opt.block, count + 2), count, opt.tol, opt.max_iter, 12345u);
  out.iterations = rr.iterations;
  out.max_residual = rr.max_residual;
  out.stagnated = rr.stagnated;
  for (std::size_t k = 0; k < rr.theta.size(); ++k) {
    out.values.push_back(out.shift + 1.0 / rr.theta[k]);
    out.vectors.push_back(rr.vectors[k]);
  }
  return out;
}

const char* class_name(EigClass c) {
  switch (c) {
    case EigClass::kernel: return "kernel";
    case EigClass::point: return "point";
    case EigClass::essential_artifact: return "essential-artifact";
  }
  return "unknown";
}

SpectralData eig_near_zero(const Discretization& d, int count, const EigOptions& opt) {
  if (!(d.weight.mu > 0.0)) throw Error(ErrorKind::config, "mu", "eig_near_zero needs mu > 0");
  SpectralData sd;
  const double h = d.grid.h();
  sd.kernel_tol = 10.0 * h * h;
  const EigResult er = eig_shift_invert(d.L, count, opt);
  sd.iterations = er.iterations;
  sd.max_residual = er.max_residual;
  sd.stagnated = er.stagnated;
  sd.eigenvalues = er.values;
  std::vector<Eigen::VectorXcd> kernel_vecs;
  for (std::size_t k = 0; k < er.values.size(); ++k) {
    if (std::abs(er.values[k]) < sd.kernel_tol) {
      sd.classes.push_back(EigClass::kernel);
      kernel_vecs.push_back(er.vectors[k]);
    } else {
      sd.classes.push_back(EigClass::essential_artifact);
    }
  }
  sd.kernel_count = static_cast<int>(kernel_vecs.size());
  if (sd.kernel_count != 2)
    throw Error(ErrorKind::numerical, "kernel-dimension",
                "expected a two-dimensional kernel, found " + std::to_string(sd.kernel_count));

  // point spectrum: eigenvalues that do not move when the domain is shrunk
  const int cut = static_cast<int>(std::lround(0.1 * (d.grid.n - 1)));
  const Grid1D sub = Grid1D::make(d.grid.x(cut), d.grid.x(d.grid.n - 1 - cut), d.grid.n - 2 * cut);
  const Discretization ds = assemble(d.params, d.profile, d.weight, sub, d.bc);
  const EigResult es = eig_shift_invert(ds.L, count + 4, opt);
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
    if (sd.classes[k] == EigClass::kernel) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& z : es.values) best = std::min(best, std::abs(z - sd.eigenvalues[k]));
    if (best < 1e-6) sd.classes[k] = EigClass::point;
  }

  sd.point_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k)
    if (sd.classes[k] == EigClass::point) sd.point_gap = std::min(sd.point_gap, -sd.eigenvalues[k].real());
  const SpectralContext ctx = make_context(d.params, d.profile.frame);
  sd.essential_gap = essential_gap(ctx, d.weight.mu);
  sd.gap = std::min(sd.point_gap, sd.essential_gap);

  // kernel basis and alignment with the analytic pair
  const Eigen::MatrixXd Qn = w_basis(d, real_span(kernel_vecs), 2);
  Eigen::MatrixXd Phi(d.size(), 2);
  Phi.col(0) = analytic_phi1(d);
  Phi.col(1) = analytic_phi2(d);
  const Eigen::MatrixXd Qa = w_basis(d, Phi, 2);
  Eigen::MatrixXd WQa(d.size(), 2);
  for (int j = 0; j < 2; ++j) WQa.col(j) = d.gram(Qa.col(j));
  const Eigen::MatrixXd E = Qa - Qn * (Qn.transpose() * WQa);
  Eigen::MatrixXd WE(d.size(), 2);
  for (int j = 0; j < 2; ++j) WE.col(j) = d.gram(E.col(j));
  const Eigen::Matrix2d EE = E.transpose() * WE;
  const double smax = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(0.5 * (EE + EE.transpose())).eigenvalues()[1];
  sd.kernel_angle = std::asin(std::min(1.0, std::sqrt(std::max(0.0, smax))));
  for (int j = 0; j < 2; ++j) {
    const Eigen::VectorXd aligned = Qn * (Qn.transpose() * d.gram(Phi.col(j)));
    (j == 0 ? sd.phi1 : sd.phi2) = aligned;
  }
  adjoint_kernel(d, sd, opt);
  return sd;
}

void adjoint_kernel(const Discretization& d, SpectralData& sd, const EigOptions& opt) {
  double shift = opt.shift;
  const BandedLU<double> lu = shifted_lu(d.L, shift);
  auto op = [&](Eigen::VectorXd x) {
    lu.solve(x.data(), 'T');
    return x;
  };
  const RitzResult rr = subspace_iteration(op, d.size(), 6, 2, opt.tol, opt.max_iter, 54321u);
  for (const cplx& th : rr.theta)
    if (!(std::abs(shift + 1.0 / th) < std::max(sd.kernel_tol, 1e-12)))
      throw Error(ErrorKind::numerical, "kernel-dimension", "adjoint kernel not two-dimensional");
  // real basis of the left null space
  const Eigen::MatrixXd R = real_span(rr.vectors);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeThinU);
  Eigen::MatrixXd Lb = svd.matrixU().leftCols(2);
  Eigen::MatrixXd Phi(d.size(), 2);
  Phi.col(0) = sd.phi1;
  Phi.col(1) = sd.phi2;
  const Eigen::Matrix2d G = Lb.transpose() * Phi;
  Eigen::JacobiSVD<Eigen::Matrix2d> gs(G);
  const double cond = gs.singularValues()[0] / gs.singularValues()[1];
  if (!(cond < 1e12)) throw Error(ErrorKind::numerical, "gram", "near-singular adjoint Gram matrix");
  Lb = Lb * G.inverse().transpose();
  sd.ell1 = Lb.col(0);
  sd.ell2 = Lb.col(1);
  sd.psi1 = d.gram_solve(sd.ell1);
  sd.psi2 = d.gram_solve(sd.ell2);
  const Eigen::Matrix2d B = Lb.transpose() * Phi;
  sd.biorth_error = (B - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd project(const SpectralData& sd, const Eigen::VectorXd& y) {
  return sd.ell1.dot(y) * sd.phi1 + sd.ell2.dot(y) * sd.phi2;
}

ExtendedState project(const Discretization& d, const SpectralData& sd, const ExtendedState& s) {
  return d.state(project(sd, d.coords(s)));
}

SimilarityReport similarity_check(const Discretization& d, int count) {
  SimilarityReport rep;
  const double mu = d.weight.mu, h = d.grid.h(), c = d.profile.frame.c;
  rep.mu = mu;
  const Mat2 A = d.params.A(), I = Mat2::Identity(), S = s_omega(d.profile.frame.omega);
  auto m_of = [&](double x) { return mu * x / std::sqrt(x * x + 1.0); };
  auto dm_of = [&](double x) { return mu / std::pow(x * x + 1.0, 1.5); };
  auto B_of = [&](double x) -> Mat2 { return c * I - 2.0 * m_of(x) * A; };
  rep.b_left = B_of(d.grid.x_min);
  rep.b_right = B_of(d.grid.x_max);
  const int n = d.grid.n, nv = d.v_count();
  RealBand M(d.size(), 3, 3);
  auto add_block = [&](int bi, int bj, const Mat2& B) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (B(a, b) != 0.0) M.add(2 * bi + a, 2 * bj + b, B(a, b));
  };
  for (int i = 0; i < nv; ++i) {
    const double x = d.grid.x(i), m = m_of(x);
    const Mat2 Bx = B_of(x);
    const Mat2 Cx = S + df_jac(d.params, d.profile.at(i)) - c * m * I + (m * m - dm_of(x)) * A;
    const Mat2 Jm = A / (h * h) - Bx / (2.0 * h), Jp = A / (h * h) + Bx / (2.0 * h);
    add_block(i, i, -2.0 * A / (h * h) + Cx);
    if (i == 0) {
      // ghost from v_x = 0: u_{-1} = u_1 - 2 h m u_0
      add_block(0, 1, Jm + Jp);
      add_block(0, 0, -2.0 * h * m * Jm);
    } else if (d.bc == BoundaryScheme::neumann && i == n - 1) {
      add_block(i, i - 1, Jm + Jp);
      add_block(i, i, 2.0 * h * m * Jp);
    } else if (d.bc == BoundaryScheme::coupled && i == nv - 1) {
      add_block(i, i - 1, Jm);
      add_block(i, nv, d.weight.eta(d.grid.x(n - 1)) * Jp);
    } else {
      add_block(i, i - 1, Jm);
      add_block(i, i + 1, Jp);
    }
  }
  add_block(nv, nv, d.E_omega);
  const EigResult a = eig_shift_invert(d.L, count);
  const EigResult b = eig_shift_invert(M, count);
  rep.direct = a.values;
  rep.transformed = b.values;
  rep.tol = std::max(1e-6, 10.0 * h * h);
  for (const cplx& z : a.values) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& w : b.values) best = std::min(best, std::abs(z - w));
    rep.max_mismatch = std::max(rep.max_mismatch, best);
  }
  rep.ok = rep.max_mismatch <= rep.tol;
  return rep;
}

std::vector<ResolventSample> resolvent_probe(const Discretization& d, const std::vector<cplx>& s_list,
                                             int iterations) {
  std::vector<ResolventSample> out;
  const int N = d.size();
  for (const cplx& s : s_list) {
    ComplexBand Mc(N, 3, 3);
    for (int j = 0; j < N; ++j)
      for (int i = std::max(0, j - 3); i <= std::min(N - 1, j + 3); ++i)
        Mc.set(i, j, (i == j ? s : cplx(0.0)) - d.L.get(i, j));
    std::optional<BandedLU<cplx>> lu;
    try {
      lu.emplace(Mc);
    } catch (const Error& e) {
      if (e.code() != "lu-singular") throw;
      throw Error(ErrorKind::numerical, "singular-solve", "s is an eigenvalue of the discrete operator");
    }
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd x(N);
    for (int i = 0; i < N; ++i) x[i] = cplx(nd(rng), nd(rng));
    // conjugate start for conjugate s keeps the estimate exactly symmetric
    if (s.imag() < 0.0) x = x.conjugate().eval();
    x /= x.norm();
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
      Eigen::VectorXcd z = d.b_inverse(x);
      lu->solve(z.data());
      const Eigen::VectorXcd y = d.b_apply(z);
      est = y.norm();
      Eigen::VectorXcd a = d.bt_apply(y);
      lu->solve(a.data(), 'C');
      x = d.bt_inverse(a);
      x /= x.norm();
    }
    if (!(est < 1e10) || !std::isfinite(est))
      throw Error(ErrorKind::numerical, "singular-solve", "resolvent norm beyond 1e10; s is (near) an eigenvalue");
    out.push_back({s, est});
  }
  return out;
}

DecayFit semigroup_decay(const Discretization& d, const SpectralData& sd, const ExtendedState& w0, double T,
                         double dt, bool project_first) {
  if (!(dt > 0.0) || !(T > 0.0)) throw Error(ErrorKind::config, "time", "need T > 0 and dt > 0");
  Eigen::VectorXd y = d.coords(w0);
  if (project_first) y -= project(sd, y);
  const BandedLU<double> lu1(d.L.shifted(-dt, 1.0)), lu2(d.L.shifted(-dt, 1.5));
  const int steps = static_cast<int>(std::llround(T / dt));
  const int stride = std::max(1, static_cast<int>(std::llround(0.5 / dt)));
  DecayFit fit;
  auto record = [&](int k) {
    fit.times.push_back(k * dt);
    fit.norms.push_back(norm_X1(d.weight, d.grid, d.state(y)));
  };
  record(0);
  Eigen::VectorXd prev;
  for (int k = 1; k <= steps; ++k) {
    Eigen::VectorXd next;
    if (k == 1) {
      next = y;
      lu1.solve(next.data());
    } else {
      next = 2.0 * y - 0.5 * prev;
      lu2.solve(next.data());
    }
    prev = y;
    y = next;
    if (!y.allFinite()) throw Error(ErrorKind::numerical, "blow-up", "non-finite values in linear evolution");
    if (k % stride == 0 || k == steps) record(k);
  }
  std::vector<double> tt, ll;
  for (std::size_t k = 0; k < fit.times.size(); ++k) {
    if (fit.times[k] < 0.25 * T - 1e-12) continue;
    tt.push_back(fit.times[k]);
    ll.push_back(std::log(fit.norms[k]));
  }
  const LinearFit lf = linear_fit(tt, ll);
  fit.nu = -lf.slope;
  fit.K = std::exp(lf.intercept) / fit.norms.front();
  fit.r2 = lf.r2;
  if (fit.nu < -1e-3)
    throw Error(ErrorKind::numerical, "growth", "linear evolution grows; discretization or assumption failure");
  return fit;
}

}  // namespace tof
