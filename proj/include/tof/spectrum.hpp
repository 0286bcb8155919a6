#pragma once

#include "tof/cgl_model.hpp"
#include "tof/common.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace tof {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

enum class Side { plus, minus };

// Spectral data of the limits x -> +inf (plus) and x -> -inf (minus).
struct SpectralContext {
  CglParams params;
  Frame frame;
  RestState rest;
};
SpectralContext make_context(const CglParams& p, const Frame& frame);

struct LimitMatrices {
  Side side = Side::plus;
  double mu = 0.0;
  Mat2 B;
  Mat2 C;
};
LimitMatrices limit_matrices(const SpectralContext& ctx, double mu, Side side);

// D(nu, mu) = -nu^2 A + i nu B + C
Mat2c dispersion_matrix(const SpectralContext& ctx, double nu, double mu, Side side);

// (s, partner) on the minus side.
std::pair<cplx, cplx> disp_minus(const SpectralContext& ctx, double nu, double mu);

struct DispersionSample {
  double nu = 0.0;
  Side side = Side::plus;
  std::vector<cplx> s_branches;
  double delta1_re = 0.0, delta1_im = 0.0;
  double delta2_re = 0.0, delta2_im = 0.0;
  double rho1 = 0.0, rho2 = 0.0;
};
DispersionSample disp_plus(const SpectralContext& ctx, double nu, double mu);

// Both branches of either side.
std::vector<cplx> dispersion_values(const SpectralContext& ctx, double nu, double mu, Side side);

struct QuadraticContact {
  double value_at_0 = 0.0;
  double curvature = 0.0;
  bool is_max = false;
};
// Throws Error(assumption, "a4-violated") when the curvature is not negative.
QuadraticContact quadratic_contact(const SpectralContext& ctx, double nu_max = 5.0, int samples = 20001);

Mat4c m_matrix(const SpectralContext& ctx, cplx s, double mu, Side side);

// Roots of det(lambda^2 A + lambda B + C - s I) from the quartic and, as a cross
// check or fallback, from a dense eigensolve of m_matrix.
std::vector<cplx> spatial_eigenvalues_quartic(const SpectralContext& ctx, cplx s, double mu, Side side,
                                              bool* converged = nullptr);
std::vector<cplx> spatial_eigenvalues_dense(const SpectralContext& ctx, cplx s, double mu, Side side);

// Count of spatial eigenvalues with Re < -tol_hyp; Error(numerical, "non-hyperbolic") otherwise.
int stable_dim(const SpectralContext& ctx, cplx s, double mu, Side side);

struct IndexResult {
  bool on_essential = false;
  int index = 0;
  int m_plus = 0;
  int m_minus = 0;
};
IndexResult fredholm_index(const SpectralContext& ctx, cplx s, double mu);

struct Window {
  double re_min = -2.0, re_max = 1.0, im_min = -4.0, im_max = 4.0;
  void validate() const;
};

struct CurvePoint {
  Side side;
  int branch;
  double nu;
  cplx s;
};
// Adaptive nu sampling of both sides until curves leave the window to the left;
// consecutive samples of a branch are closer than ds where the curve is continuous.
std::vector<CurvePoint> sample_curves(const SpectralContext& ctx, double mu, const Window& w, double ds);

enum class CellStatus { regular, on_curve };
struct IndexCell {
  CellStatus status = CellStatus::regular;
  int index = 0;
  int m_plus = 0;
  int m_minus = 0;
};

struct IndexMap {
  Window window;
  int resolution = 0;
  double mu = 0.0;
  std::vector<IndexCell> cells;  // row-major: cells[j * resolution + i], i along Re, j along Im
  std::vector<CurvePoint> curves;
  double re_at(int i) const;
  double im_at(int j) const;
  const IndexCell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * resolution + i]; }
};
IndexMap map_region(const SpectralContext& ctx, double mu, const Window& w, int resolution, int threads = 0);

struct Sector {
  double mu = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  double min_distance = 0.0;
  int curve_samples = 0;
  std::vector<std::string> notes;
};
// Membership in S_{eps,beta}(mu).
bool in_sector(const Sector& sec, cplx s);
Sector fit_sector(const SpectralContext& ctx, double mu, double eps_max = 10.0, int boundary_samples = 2000);

// max over nu and both branches of Re s on one side.
double max_real_part(const SpectralContext& ctx, double mu, Side side);

// -max over nu, sides and branches of Re s at weight mu.
double essential_gap(const SpectralContext& ctx, double mu);

}  // namespace tof
