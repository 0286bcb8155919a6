#pragma once

#include "tof/common.hpp"

#include <complex>
#include <string>
#include <vector>

namespace tof {

struct Complex2 {
  double re = 0.0;
  double im = 0.0;
  std::complex<double> c() const { return {re, im}; }
};

// Matrix form [[re, -im], [im, re]] of a complex number.
Mat2 as_matrix(Complex2 z);
Mat2 as_matrix(std::complex<double> z);
Mat2 rotation(double theta);
Mat2 s_omega(double omega);
inline Mat2 s1() { return s_omega(1.0); }

struct CglParams {
  Complex2 alpha{1.0, 0.0};
  // G(y) = poly[0] + poly[1] y + poly[2] y^2 + ... (coefficients beta1, beta3, beta5, ...)
  std::vector<Complex2> poly;

  Mat2 A() const { return as_matrix(alpha); }
  Mat2 A_inv() const;

  static CglParams real_alpha();
  static CglParams complex_alpha();
};

// k-th derivative of G at y, as (g1^(k), g2^(k)).
Complex2 g_eval(const CglParams& p, double y, int order = 0);
Vec2 f_eval(const CglParams& p, const Vec2& u);
Mat2 df_jac(const CglParams& p, const Vec2& u);

struct RestState {
  double y_inf = 0.0;
  Vec2 v_inf = Vec2::Zero();
  double omega = 0.0;
  double r_inf() const { return v_inf[0]; }
};

// Throws Error(assumption, "no-root") or Error(assumption, "ambiguous-rest-state").
RestState rest_state(const CglParams& p);

struct AssumptionReport {
  bool a1_ok = false;
  bool a2_ok = false;
  bool a4_ok = false;
  double a4_value = 0.0;
  std::string notes;
};
AssumptionReport check_assumptions(const CglParams& p, const RestState& rest);

// Co-moving / co-rotating frame data of a front.
struct Frame {
  double c = 0.0;
  double omega = 0.0;
  Vec2 v_inf = Vec2::Zero();
};

// rho_j = g_j'(y_inf) y_inf
Vec2 rho_coefficients(const CglParams& p, const RestState& rest);

}  // namespace tof
