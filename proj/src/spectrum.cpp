#include "tof/spectrum.hpp"

#include "tof/profile.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace tof {

namespace {
constexpr cplx I1{0.0, 1.0};

Mat2c to_c(const Mat2& m) { return m.cast<cplx>(); }
}  // namespace

SpectralContext make_context(const CglParams& p, const Frame& frame) {
  SpectralContext ctx{p, frame, rest_state(p)};
  return ctx;
}

LimitMatrices limit_matrices(const SpectralContext& ctx, double mu, Side side) {
  const double c = ctx.frame.c;
  const Mat2 A = ctx.params.A(), I = Mat2::Identity();
  LimitMatrices lm;
  lm.side = side;
  lm.mu = mu;
  // limits of eta L eta^{-1}: the first-order coefficient is c - 2 eta'/eta A
  const double sgn = side == Side::plus ? -1.0 : 1.0;
  lm.B = c * I + sgn * 2.0 * mu * A;
  const Mat2 base = s_omega(ctx.frame.omega) + mu * mu * A;
  if (side == Side::plus)
    lm.C = base - c * mu * I + df_jac(ctx.params, ctx.frame.v_inf);
  else
    lm.C = base + c * mu * I + df_jac(ctx.params, Vec2::Zero());
  return lm;
}

Mat2c dispersion_matrix(const SpectralContext& ctx, double nu, double mu, Side side) {
  const LimitMatrices lm = limit_matrices(ctx, mu, side);
  return -nu * nu * to_c(ctx.params.A()) + I1 * nu * to_c(lm.B) + to_c(lm.C);
}

std::pair<cplx, cplx> disp_minus(const SpectralContext& ctx, double nu, double mu) {
  const double a1 = ctx.params.alpha.re, a2 = ctx.params.alpha.im, c = ctx.frame.c;
  const Complex2 g0 = g_eval(ctx.params, 0.0, 0);
  // D_- = a I + b J with J the rotation generator, z = i nu + mu
  const cplx z = I1 * nu + mu;
  const cplx a = z * z * a1 + c * z + g0.re;
  const cplx b = z * z * a2 + ctx.frame.omega + g0.im;
  return {a + I1 * b, a - I1 * b};
}

DispersionSample disp_plus(const SpectralContext& ctx, double nu, double mu) {
  const double a1 = ctx.params.alpha.re, a2 = ctx.params.alpha.im, c = ctx.frame.c;
  const Vec2 rho = rho_coefficients(ctx.params, ctx.rest);
  const cplx z2 = (I1 * nu - mu) * (I1 * nu - mu);
  const cplx d1 = z2 * a1 + I1 * nu * c - c * mu;
  const cplx d2 = z2 * a2;
  const cplx root = std::sqrt(rho[0] * rho[0] - 2.0 * d2 * rho[1] - d2 * d2);
  DispersionSample ds;
  ds.nu = nu;
  ds.side = Side::plus;
  ds.s_branches = {d1 + rho[0] + root, d1 + rho[0] - root};
  ds.delta1_re = d1.real();
  ds.delta1_im = d1.imag();
  ds.delta2_re = d2.real();
  ds.delta2_im = d2.imag();
  ds.rho1 = rho[0];
  ds.rho2 = rho[1];
  return ds;
}

std::vector<cplx> dispersion_values(const SpectralContext& ctx, double nu, double mu, Side side) {
  if (side == Side::plus) return disp_plus(ctx, nu, mu).s_branches;
  const auto pr = disp_minus(ctx, nu, mu);
  return {pr.first, pr.second};
}

QuadraticContact quadratic_contact(const SpectralContext& ctx, double nu_max, int samples) {
  const Vec2 rho = rho_coefficients(ctx.params, ctx.rest);
  QuadraticContact qc;
  qc.curvature = 2.0 / std::abs(rho[0]) * (rho[0] * ctx.params.alpha.re + rho[1] * ctx.params.alpha.im);
  if (!(qc.curvature < 0.0))
    throw Error(ErrorKind::assumption, "a4-violated",
                "curvature of the critical dispersion curve at nu = 0 is not negative");
  qc.value_at_0 = std::abs(disp_plus(ctx, 0.0, 0.0).s_branches[0]);
  const double r0 = disp_plus(ctx, 0.0, 0.0).s_branches[0].real();
  qc.is_max = true;
  if (samples % 2 == 0) ++samples;
  for (int k = 0; k < samples; ++k) {
    const double nu = -nu_max + 2.0 * nu_max * k / (samples - 1);
    if (k == samples / 2) continue;
    for (const cplx& s : disp_plus(ctx, nu, 0.0).s_branches)
      if (!(s.real() < r0)) qc.is_max = false;
  }
  return qc;
}

Mat4c m_matrix(const SpectralContext& ctx, cplx s, double mu, Side side) {
  const LimitMatrices lm = limit_matrices(ctx, mu, side);
  const Mat2c Ai = to_c(ctx.params.A_inv());
  Mat4c M = Mat4c::Zero();
  M.block<2, 2>(0, 2) = Mat2c::Identity();
  M.block<2, 2>(2, 0) = Ai * (s * Mat2c::Identity() - to_c(lm.C));
  M.block<2, 2>(2, 2) = -Ai * to_c(lm.B);
  return M;
}

namespace {

using Poly = std::array<cplx, 5>;

Poly quartic_coefficients(const SpectralContext& ctx, cplx s, double mu, Side side) {
  const LimitMatrices lm = limit_matrices(ctx, mu, side);
  const Mat2 A = ctx.params.A();
  auto entry = [&](int i, int j) {
    return std::array<cplx, 3>{cplx(lm.C(i, j)) - (i == j ? s : cplx(0.0)), cplx(lm.B(i, j)), cplx(A(i, j))};
  };
  auto mul = [](const std::array<cplx, 3>& a, const std::array<cplx, 3>& b) {
    Poly out{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[i + j] += a[i] * b[j];
    return out;
  };
  const Poly p1 = mul(entry(0, 0), entry(1, 1)), p2 = mul(entry(0, 1), entry(1, 0));
  Poly p;
  for (int k = 0; k < 5; ++k) p[k] = p1[k] - p2[k];
  return p;
}

cplx horner(const Poly& p, cplx z, cplx* dp) {
  cplx v = p[4], d = 0.0;
  for (int k = 3; k >= 0; --k) {
    d = d * z + v;
    v = v * z + p[k];
  }
  if (dp) *dp = d;
  return v;
}

}  // namespace

std::vector<cplx> spatial_eigenvalues_quartic(const SpectralContext& ctx, cplx s, double mu, Side side,
                                              bool* converged) {
  Poly p = quartic_coefficients(ctx, s, mu, side);
  const cplx lead = p[4];
  for (auto& c : p) c /= lead;
  double bound = 0.0;
  for (int k = 0; k < 4; ++k) bound = std::max(bound, std::abs(p[k]));
  const double radius = 1.0 + bound;
  std::array<cplx, 4> z;
  for (int k = 0; k < 4; ++k) z[k] = std::polar(0.5 * radius, 2.0 * std::numbers::pi * k / 4 + 0.4);
  bool ok = false;
  for (int it = 0; it < 500 && !ok; ++it) {
    ok = true;
    for (int k = 0; k < 4; ++k) {
      cplx dp;
      const cplx v = horner(p, z[k], &dp);
      if (v == cplx(0.0)) continue;
      const cplx w = v / dp;
      cplx sum = 0.0;
      for (int j = 0; j < 4; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      const cplx step = w / (1.0 - w * sum);
      z[k] -= step;
      if (std::abs(step) > 1e-15 * (1.0 + std::abs(z[k]))) ok = false;
    }
  }
  for (int k = 0; k < 4; ++k) {
    for (int it = 0; it < 2; ++it) {
      cplx dp;
      const cplx v = horner(p, z[k], &dp);
      if (dp == cplx(0.0)) break;
      z[k] -= v / dp;
    }
  }
  if (converged) *converged = ok;
  return {z.begin(), z.end()};
}

std::vector<cplx> spatial_eigenvalues_dense(const SpectralContext& ctx, cplx s, double mu, Side side) {
  Eigen::ComplexEigenSolver<Mat4c> es;
  es.setMaxIterations(500);
  es.compute(m_matrix(ctx, s, mu, side), false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::numerical, "eig-nonconvergence", "dense 4x4 eigensolver did not converge");
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + 4};
}

int stable_dim(const SpectralContext& ctx, cplx s, double mu, Side side) {
  bool ok = false;
  std::vector<cplx> roots = spatial_eigenvalues_quartic(ctx, s, mu, side, &ok);
  double min_sep = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) min_sep = std::min(min_sep, std::abs(roots[i] - roots[j]));
  if (!ok || min_sep < 1e-6) roots = spatial_eigenvalues_dense(ctx, s, mu, side);
  int m = 0;
  for (const cplx& l : roots) {
    if (std::abs(l.real()) <= tol_hyp)
      throw Error(ErrorKind::numerical, "non-hyperbolic", "spatial eigenvalue on the imaginary axis");
    if (l.real() < 0) ++m;
  }
  return m;
}

IndexResult fredholm_index(const SpectralContext& ctx, cplx s, double mu) {
  IndexResult r;
  try {
    r.m_plus = stable_dim(ctx, s, mu, Side::plus);
    r.m_minus = stable_dim(ctx, s, mu, Side::minus);
    r.index = r.m_plus - r.m_minus;
  } catch (const Error& e) {
    if (e.code() != "non-hyperbolic") throw;
    r.on_essential = true;
  }
  return r;
}

void Window::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max))
    throw Error(ErrorKind::config, "window", "window needs re_min < re_max and im_min < im_max");
  if (!std::isfinite(re_min) || !std::isfinite(re_max) || !std::isfinite(im_min) || !std::isfinite(im_max))
    throw Error(ErrorKind::config, "window", "window bounds must be finite");
}

namespace {

double distance_to_window(const Window& w, cplx s) {
  const double dx = std::max({w.re_min - s.real(), 0.0, s.real() - w.re_max});
  const double dy = std::max({w.im_min - s.imag(), 0.0, s.imag() - w.im_max});
  return std::hypot(dx, dy);
}

double choose_nu_max(const SpectralContext& ctx, double mu, double re_left) {
  double nu = 1.0;
  for (int it = 0; it < 60; ++it) {
    double worst = -std::numeric_limits<double>::infinity();
    for (Side side : {Side::plus, Side::minus})
      for (double sg : {-1.0, 1.0})
        for (const cplx& s : dispersion_values(ctx, sg * nu, mu, side)) worst = std::max(worst, s.real());
    if (worst < re_left - 1.0) break;
    nu *= 2.0;
  }
  return 2.0 * nu;
}

}  // namespace

std::vector<CurvePoint> sample_curves(const SpectralContext& ctx, double mu, const Window& w, double ds) {
  const double nu_max = choose_nu_max(ctx, mu, w.re_min);
  const int base = 4001;
  std::vector<CurvePoint> out;
  for (Side side : {Side::plus, Side::minus}) {
    for (int br = 0; br < 2; ++br) {
      auto eval = [&](double nu) { return dispersion_values(ctx, nu, mu, side)[br]; };
      struct Seg {
        double a, b;
        cplx sa, sb;
        int depth;
      };
      std::vector<double> nus(base);
      for (int k = 0; k < base; ++k) nus[k] = -nu_max + 2.0 * nu_max * k / (base - 1);
      std::vector<CurvePoint> pts;
      for (int k = 0; k + 1 < base; ++k) {
        std::vector<Seg> stack{{nus[k], nus[k + 1], eval(nus[k]), eval(nus[k + 1]), 0}};
        if (k == 0) pts.push_back({side, br, nus[0], stack[0].sa});
        std::vector<CurvePoint> local;
        // depth-first with right child pushed first so points come out ordered in nu
        while (!stack.empty()) {
          Seg sg = stack.back();
          stack.pop_back();
          const double len = std::abs(sg.sb - sg.sa);
          const bool far = distance_to_window(w, sg.sa) > len + ds && distance_to_window(w, sg.sb) > len + ds;
          if (len > ds && !far && sg.depth < 40) {
            const double m = 0.5 * (sg.a + sg.b);
            const cplx sm = eval(m);
            stack.push_back({m, sg.b, sm, sg.sb, sg.depth + 1});
            stack.push_back({sg.a, m, sg.sa, sm, sg.depth + 1});
          } else {
            local.push_back({side, br, sg.b, sg.sb});
          }
        }
        pts.insert(pts.end(), local.begin(), local.end());
      }
      out.insert(out.end(), pts.begin(), pts.end());
    }
  }
  return out;
}

double IndexMap::re_at(int i) const {
  return window.re_min + (window.re_max - window.re_min) * i / (resolution - 1);
}
double IndexMap::im_at(int j) const {
  return window.im_min + (window.im_max - window.im_min) * j / (resolution - 1);
}

IndexMap map_region(const SpectralContext& ctx, double mu, const Window& w, int resolution, int threads) {
  w.validate();
  if (resolution < 2) throw Error(ErrorKind::config, "resolution", "resolution must be >= 2");
  IndexMap map;
  map.window = w;
  map.resolution = resolution;
  map.mu = mu;
  map.cells.assign(static_cast<std::size_t>(resolution) * resolution, IndexCell{});
  const double dre = (w.re_max - w.re_min) / (resolution - 1), dim = (w.im_max - w.im_min) / (resolution - 1);
  const double tol_curve = 2.0 * std::max(dre, dim);
  map.curves = sample_curves(ctx, mu, w, 0.5 * std::min(dre, dim));
  auto flag = [&](cplx s) {
    const int i0 = static_cast<int>(std::floor((s.real() - tol_curve - w.re_min) / dre));
    const int i1 = static_cast<int>(std::ceil((s.real() + tol_curve - w.re_min) / dre));
    const int j0 = static_cast<int>(std::floor((s.imag() - tol_curve - w.im_min) / dim));
    const int j1 = static_cast<int>(std::ceil((s.imag() + tol_curve - w.im_min) / dim));
    for (int j = std::max(0, j0); j <= std::min(resolution - 1, j1); ++j)
      for (int i = std::max(0, i0); i <= std::min(resolution - 1, i1); ++i)
        if (std::abs(cplx(map.re_at(i), map.im_at(j)) - s) <= tol_curve)
          map.cells[static_cast<std::size_t>(j) * resolution + i].status = CellStatus::on_curve;
  };
  for (const CurvePoint& cp : map.curves) {
    if (distance_to_window(w, cp.s) > tol_curve) continue;
    flag(cp.s);
    flag(std::conj(cp.s));
  }
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, resolution);
  auto work = [&](int t) {
    for (int j = t; j < resolution; j += nt) {
      for (int i = 0; i < resolution; ++i) {
        IndexCell& cell = map.cells[static_cast<std::size_t>(j) * resolution + i];
        if (cell.status == CellStatus::on_curve) continue;
        const IndexResult r = fredholm_index(ctx, cplx(map.re_at(i), map.im_at(j)), mu);
        if (r.on_essential) {
          cell.status = CellStatus::on_curve;
        } else {
          cell.index = r.index;
          cell.m_plus = r.m_plus;
          cell.m_minus = r.m_minus;
        }
      }
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  return map;
}

bool in_sector(const Sector& sec, cplx s) {
  if (sec.mu > 0.0) return std::abs(std::arg(s + sec.beta * sec.mu)) <= std::numbers::pi / 2 + sec.eps * sec.mu;
  const double y = std::abs(s.imag());
  return s.real() >= -sec.kappa * std::pow(std::min(y, sec.beta), 2) + sec.eps * std::min(sec.beta - y, 0.0);
}

namespace {

double dist_to_ray(cplx p, cplx origin, cplx dir) {
  const cplx d = p - origin;
  const double t = std::max(0.0, (d * std::conj(dir)).real());
  return std::abs(d - t * dir);
}

// Whether p keeps a distance > tol from the sector boundary (rays analytic, parabola sampled).
bool clears_boundary(const Sector& sec, cplx p, double tol) {
  if (sec.mu > 0.0) {
    const double ang = std::numbers::pi / 2 + sec.eps * sec.mu;
    const cplx o(-sec.beta * sec.mu, 0.0);
    return dist_to_ray(p, o, std::polar(1.0, ang)) > tol && dist_to_ray(p, o, std::polar(1.0, -ang)) > tol;
  }
  const double edge = -sec.kappa * sec.beta * sec.beta;
  // rays continue with Re = edge - eps (|Im| - beta)
  const cplx ru = cplx(-sec.eps, 1.0) / std::hypot(sec.eps, 1.0);
  if (dist_to_ray(p, cplx(edge, sec.beta), ru) <= tol) return false;
  if (dist_to_ray(p, cplx(edge, -sec.beta), std::conj(ru)) <= tol) return false;
  const double bx = std::max({edge - p.real(), 0.0, p.real()});
  const double by = std::max(std::abs(p.imag()) - sec.beta, 0.0);
  if (std::hypot(bx, by) > tol) return true;
  const int m = 400;
  for (int k = 0; k <= m; ++k) {
    const double y = -sec.beta + 2.0 * sec.beta * k / m;
    if (std::abs(p - cplx(-sec.kappa * y * y, y)) <= tol) return false;
  }
  return true;
}

bool admissible(const Sector& sec, const std::vector<cplx>& pts, double tol, double contact_radius) {
  for (const cplx& s : pts) {
    if (sec.mu == 0.0 && std::abs(s) <= contact_radius) {
      if (std::abs(s) > 1e-12 && in_sector(sec, s)) return false;
      continue;
    }
    if (in_sector(sec, s)) return false;
    if (!clears_boundary(sec, s, tol)) return false;
  }
  return true;
}

double fit_eps(Sector sec, const std::vector<cplx>& pts, double eps_max, double tol, double contact_radius) {
  sec.eps = eps_max;
  if (admissible(sec, pts, tol, contact_radius)) return eps_max;
  double lo = 0.0, hi = eps_max;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    sec.eps = mid;
    if (admissible(sec, pts, tol, contact_radius)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

Sector fit_sector(const SpectralContext& ctx, double mu, double eps_max, int boundary_samples) {
  if (mu < 0.0) throw Error(ErrorKind::config, "mu", "mu must be >= 0");
  quadratic_contact(ctx);
  const Vec2 rho = rho_coefficients(ctx.params, ctx.rest);
  const double c = ctx.frame.c;
  Sector sec;
  sec.mu = mu;
  sec.beta = c / 2.0;
  sec.kappa = std::abs(rho[0] * ctx.params.alpha.re + rho[1] * ctx.params.alpha.im) / (4.0 * c * c * std::abs(rho[0]));
  const Window w{-10.0, 5.0, -20.0, 20.0};
  const double tol = 1e-3;
  const double contact_radius = mu == 0.0 ? 0.1 * sec.beta : 0.0;
  auto points = [&](double ds) {
    std::vector<cplx> pts;
    for (const CurvePoint& cp : sample_curves(ctx, mu, w, ds)) {
      pts.push_back(cp.s);
      pts.push_back(std::conj(cp.s));
    }
    return pts;
  };
  const std::vector<cplx> coarse = points(4e-3);
  const double eps1 = fit_eps(sec, coarse, eps_max, tol, contact_radius);
  const std::vector<cplx> fine = points(2e-3);
  const double eps2 = fit_eps(sec, fine, eps_max, tol, contact_radius);
  if (std::abs(eps2 - eps1) > 1e-3 * std::max(eps1, 1e-12))
    sec.notes.push_back("sampling-inconclusive: eps changed under curve refinement; refined value used");
  sec.eps = eps2;
  sec.curve_samples = static_cast<int>(fine.size());
  if (!(sec.eps > 0.0))
    throw Error(ErrorKind::numerical, "no-sector", "no admissible sector opening found");
  if (mu == 0.0) sec.notes.push_back("contact point s = 0 excluded from the boundary distance check");
  // sampled boundary distance at the accepted opening
  std::vector<cplx> bpts;
  const double R = 20.0;
  for (int k = 0; k < boundary_samples; ++k) {
    const double t = R * (k + 0.5) / boundary_samples;
    if (mu > 0.0) {
      const double ang = std::numbers::pi / 2 + sec.eps * mu;
      bpts.push_back(cplx(-sec.beta * mu, 0.0) + t * std::polar(1.0, ang));
      bpts.push_back(cplx(-sec.beta * mu, 0.0) + t * std::polar(1.0, -ang));
    } else {
      const double y = -R + 2.0 * R * (k + 0.5) / boundary_samples;
      const double ay = std::abs(y);
      bpts.push_back(cplx(-sec.kappa * std::pow(std::min(ay, sec.beta), 2) + sec.eps * std::min(sec.beta - ay, 0.0), y));
    }
  }
  sec.min_distance = std::numeric_limits<double>::infinity();
  for (const cplx& b : bpts) {
    if (std::abs(b) <= contact_radius) continue;
    for (const cplx& s : fine) sec.min_distance = std::min(sec.min_distance, std::abs(b - s));
  }
  return sec;
}

double max_real_part(const SpectralContext& ctx, double mu, Side side) {
  const double nu_max = choose_nu_max(ctx, mu, -1.0);
  double best = -std::numeric_limits<double>::infinity();
  {
    for (int br = 0; br < 2; ++br) {
      auto re = [&](double nu) { return dispersion_values(ctx, nu, mu, side)[br].real(); };
      const int m = 20001;
      double step = 2.0 * nu_max / (m - 1);
      int kbest = 0;
      double vbest = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < m; ++k) {
        const double v = re(-nu_max + k * step);
        if (v > vbest) {
          vbest = v;
          kbest = k;
        }
      }
      double a = -nu_max + (kbest - 1) * step, b = -nu_max + (kbest + 1) * step;
      for (int it = 0; it < 100; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (re(m1) < re(m2)) a = m1;
        else b = m2;
      }
      best = std::max({best, vbest, re(0.5 * (a + b))});
    }
  }
  return best;
}

double essential_gap(const SpectralContext& ctx, double mu) {
  return -std::max(max_real_part(ctx, mu, Side::plus), max_real_part(ctx, mu, Side::minus));
}

}  // namespace tof
