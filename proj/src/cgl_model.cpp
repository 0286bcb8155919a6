#include "tof/cgl_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tof {

Mat2 as_matrix(Complex2 z) {
  Mat2 m;
  m << z.re, -z.im, z.im, z.re;
  return m;
}

Mat2 as_matrix(std::complex<double> z) { return as_matrix(Complex2{z.real(), z.imag()}); }

Mat2 rotation(double theta) {
  Mat2 m;
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

Mat2 s_omega(double omega) {
  Mat2 m;
  m << 0.0, -omega, omega, 0.0;
  return m;
}

Mat2 CglParams::A_inv() const {
  const std::complex<double> inv = 1.0 / alpha.c();
  return as_matrix(inv);
}

CglParams CglParams::real_alpha() {
  CglParams p;
  p.alpha = {1.0, 0.0};
  p.poly = {{-0.125, 0.0}, {1.0, 1.0}, {-1.0, 1.0}};
  return p;
}

CglParams CglParams::complex_alpha() {
  CglParams p;
  p.alpha = {1.0, 0.5};
  p.poly = {{-0.1, 0.0}, {1.0, 1.0}, {-1.0, 1.0}};
  return p;
}

Complex2 g_eval(const CglParams& p, double y, int order) {
  if (order < 0 || order > 3)
    throw Error(ErrorKind::domain, "unsupported-derivative", "g_eval supports derivative orders 0..3");
  if (y < 0.0) throw Error(ErrorKind::domain, "negative-argument", "g_eval needs y >= 0");
  const int deg = static_cast<int>(p.poly.size()) - 1;
  std::complex<double> acc = 0.0;
  for (int k = deg; k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= (k - j);
    acc = acc * y + falling * p.poly[k].c();
  }
  return {acc.real(), acc.imag()};
}

Vec2 f_eval(const CglParams& p, const Vec2& u) {
  const Complex2 g = g_eval(p, u.squaredNorm(), 0);
  return Vec2(g.re * u[0] - g.im * u[1], g.im * u[0] + g.re * u[1]);
}

Mat2 df_jac(const CglParams& p, const Vec2& u) {
  const double y = u.squaredNorm();
  return as_matrix(g_eval(p, y, 0)) + 2.0 * as_matrix(g_eval(p, y, 1)) * (u * u.transpose());
}

namespace {

double g1(const CglParams& p, double y) { return g_eval(p, y, 0).re; }
double g1p(const CglParams& p, double y) { return g_eval(p, y, 1).re; }

std::vector<double> real_roots_g1(const CglParams& p) {
  std::vector<double> a;
  for (const auto& b : p.poly) a.push_back(b.re);
  while (!a.empty() && a.back() == 0.0) a.pop_back();
  std::vector<double> roots;
  const int deg = static_cast<int>(a.size()) - 1;
  if (deg <= 0) return roots;
  if (deg == 1) {
    roots.push_back(-a[0] / a[1]);
  } else if (deg == 2) {
    const double disc = a[1] * a[1] - 4.0 * a[2] * a[0];
    if (disc < 0.0) return roots;
    const double q = -0.5 * (a[1] + std::copysign(std::sqrt(disc), a[1]));
    if (q != 0.0) roots.push_back(a[0] / q);
    roots.push_back(q / a[2]);
  } else {
    double bound = 0.0;
    for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(a[k] / a[deg]));
    const double y_max = 1.0 + bound;
    const int m = 4000;
    double y0 = 0.0, f0 = g1(p, 0.0);
    for (int k = 1; k <= m; ++k) {
      const double y1 = y_max * k / m, f1 = g1(p, y1);
      if (f0 == 0.0) roots.push_back(y0);
      if (f0 * f1 < 0.0) {
        double lo = y0, hi = y1, flo = f0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          const double mid = 0.5 * (lo + hi), fm = g1(p, mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double y = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) {
          const double d = g1p(p, y);
          if (d == 0.0) break;
          const double yn = y - g1(p, y) / d;
          if (yn < y0 || yn > y1) break;
          y = yn;
        }
        roots.push_back(y);
      }
      y0 = y1;
      f0 = f1;
    }
  }
  return roots;
}

}  // namespace

RestState rest_state(const CglParams& p) {
  std::vector<double> admissible;
  for (double y : real_roots_g1(p))
    if (y > 0.0 && g1p(p, y) < 0.0) admissible.push_back(y);
  if (admissible.empty())
    throw Error(ErrorKind::assumption, "no-root", "g1(y) = 0 has no root y > 0 with g1'(y) < 0");
  if (admissible.size() > 1) {
    std::ostringstream os;
    os << "multiple admissible rest states y_inf =";
    for (double y : admissible) os << ' ' << y;
    throw Error(ErrorKind::assumption, "ambiguous-rest-state", os.str());
  }
  RestState r;
  r.y_inf = admissible.front();
  r.v_inf = Vec2(std::sqrt(r.y_inf), 0.0);
  r.omega = -g_eval(p, r.y_inf, 0).im;
  return r;
}

AssumptionReport check_assumptions(const CglParams& p, const RestState& rest) {
  AssumptionReport rep;
  const double g10 = g_eval(p, 0.0, 0).re;
  rep.a1_ok = p.alpha.re > 0.0 && g10 < 0.0;
  const Complex2 gp = g_eval(p, rest.y_inf, 1);
  rep.a2_ok = rest.y_inf > 0.0 && gp.re < 0.0;
  rep.a4_value = p.alpha.im * gp.im + p.alpha.re * gp.re;
  rep.a4_ok = rep.a4_value < 0.0;
  std::ostringstream os;
  if (!(p.alpha.re > 0.0)) os << "alpha_re must be positive; ";
  if (!(g10 < 0.0)) os << "g1(0) must be negative; ";
  if (!rep.a2_ok) os << "g1'(y_inf) must be negative; ";
  if (!rep.a4_ok) os << "alpha2 g2'(y_inf) + alpha1 g1'(y_inf) = " << rep.a4_value << " is not negative; ";
  rep.notes = os.str();
  return rep;
}

Vec2 rho_coefficients(const CglParams& p, const RestState& rest) {
  const Complex2 gp = g_eval(p, rest.y_inf, 1);
  return Vec2(gp.re * rest.y_inf, gp.im * rest.y_inf);
}

}  // namespace tof
