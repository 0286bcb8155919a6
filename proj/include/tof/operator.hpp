#pragma once

#include "tof/banded.hpp"
#include "tof/cgl_model.hpp"
#include "tof/common.hpp"
#include "tof/discrete.hpp"
#include "tof/profile.hpp"
#include "tof/spectrum.hpp"
#include "tof/weight.hpp"

#include <vector>

namespace tof {

// Linearization about the profile on the extended space, in coordinates
// y = (v nodes, rho) of the chosen boundary scheme.
struct Discretization {
  CglParams params;
  Profile profile;  // resampled onto grid
  Grid1D grid;
  WeightSpec weight;
  BoundaryScheme bc = BoundaryScheme::coupled;
  RealBand L;
  Mat2 E_omega;
  Eigen::VectorXd quad;  // trapezoid weight times eta^2, all nodes
  Eigen::VectorXd vhat;  // template at the nodes

  int size() const { return L.size(); }
  int v_count() const { return v_nodes(grid.n, bc); }
  Eigen::VectorXd coords(const ExtendedState& s) const { return to_coords(s, bc); }
  ExtendedState state(const Eigen::VectorXd& y) const { return from_coords(y, grid.n, bc); }
  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
  // W y with weighted_inner(u, v, 0) = coords(u)^T W coords(v)
  Eigen::VectorXd gram(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& z) const;
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(gram(b)); }
  // Factor B with W = B^T B, and its inverse and transposes.
  Eigen::VectorXcd b_apply(const Eigen::VectorXcd& y) const;
  Eigen::VectorXcd b_inverse(const Eigen::VectorXcd& z) const;
  Eigen::VectorXcd bt_apply(const Eigen::VectorXcd& z) const;
  Eigen::VectorXcd bt_inverse(const Eigen::VectorXcd& y) const;
};

// Requires the grid inside the profile's grid and a valid weight (checked against mu_star).
Discretization assemble(const CglParams& p, const Profile& prof, const WeightSpec& w, const Grid1D& grid,
                        BoundaryScheme bc = BoundaryScheme::coupled);
Discretization assemble(const CglParams& p, const Profile& prof, const WeightSpec& w,
                        BoundaryScheme bc = BoundaryScheme::coupled);

// (v_*', 0) and (S1 v_*, S1 v_inf) in coordinates.
Eigen::VectorXd analytic_phi1(const Discretization& d);
Eigen::VectorXd analytic_phi2(const Discretization& d);

struct KernelResidual {
  double phi1 = 0.0;
  double phi2 = 0.0;
};
// X_eta norms of L_h phi_i relative to ||phi_i||.
KernelResidual kernel_residuals(const Discretization& d);

struct EigOptions {
  int block = 12;
  double tol = 1e-10;
  int max_iter = 500;
  // slightly right of the kernel so the near-singular solve stays well conditioned
  double shift = 0.05;
};

struct EigResult {
  std::vector<cplx> values;          // sorted by distance to the shift
  std::vector<Eigen::VectorXcd> vectors;
  int iterations = 0;
  double shift = 0.0;
  double max_residual = 0.0;
  // accepted after the residuals stopped decreasing below 1e-6 instead of reaching tol
  bool stagnated = false;
};
// Block shift-invert subspace iteration with Rayleigh-Ritz; the `count` eigenvalues
// closest to the shift. Retries once at shift + 1e-6 when the LU is singular.
EigResult eig_shift_invert(const RealBand& M, int count, const EigOptions& opt = {});

enum class EigClass { kernel, point, essential_artifact };
const char* class_name(EigClass c);

struct SpectralData {
  std::vector<cplx> eigenvalues;
  std::vector<EigClass> classes;
  int kernel_count = 0;
  double kernel_tol = 0.0;
  double kernel_angle = 0.0;  // largest principal angle to span{phi1, phi2}
  // kernel vectors aligned to the analytic pair, and biorthonormal adjoint data
  Eigen::VectorXd phi1, phi2;
  Eigen::VectorXd ell1, ell2;  // (psi_i, y) = ell_i^T y
  Eigen::VectorXd psi1, psi2;  // W^{-1} ell_i
  double point_gap = 0.0;
  double essential_gap = 0.0;
  double gap = 0.0;
  double biorth_error = 0.0;
  int iterations = 0;
  double max_residual = 0.0;
  bool stagnated = false;
};

// Eigenvalues closest to 0 (count of them), classified, plus kernel and adjoint data.
// Requires mu > 0.
SpectralData eig_near_zero(const Discretization& d, int count = 8, const EigOptions& opt = {});

// Left null vectors of L_h turned into psi via the Gram matrix and biorthonormalized
// against phi1, phi2 (fills ell*, psi*, biorth_error).
void adjoint_kernel(const Discretization& d, SpectralData& sd, const EigOptions& opt = {});

Eigen::VectorXd project(const SpectralData& sd, const Eigen::VectorXd& y);
ExtendedState project(const Discretization& d, const SpectralData& sd, const ExtendedState& s);

struct SimilarityReport {
  double mu = 0.0;
  std::vector<cplx> direct;
  std::vector<cplx> transformed;
  double max_mismatch = 0.0;
  double tol = 0.0;
  bool ok = false;
  Mat2 b_left, b_right;  // B(mu, x) at the grid ends
};
// Eigenvalues near 0 of the finite-difference discretization of eta L eta^{-1}
// compared with those of d.
SimilarityReport similarity_check(const Discretization& d, int count = 6);

struct ResolventSample {
  cplx s;
  double norm = 0.0;
};
// Weighted-norm estimate of ||(sI - L_h)^{-1}|| by power iteration.
std::vector<ResolventSample> resolvent_probe(const Discretization& d, const std::vector<cplx>& s_list,
                                             int iterations = 20);

struct DecayFit {
  double K = 0.0;
  double nu = 0.0;
  double r2 = 0.0;
  std::vector<double> times;
  std::vector<double> norms;
};
// Evolves w' = L_h w with BDF2 from (I - P) w0 (or w0 when project_first is false) and
// fits log ||w||_{X1_eta} on [T/4, T]. Error(numerical, "growth") for nu < -1e-3.
DecayFit semigroup_decay(const Discretization& d, const SpectralData& sd, const ExtendedState& w0, double T,
                         double dt, bool project_first = true);

}  // namespace tof
