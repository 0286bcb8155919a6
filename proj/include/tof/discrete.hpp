#pragma once

#include "tof/banded.hpp"
#include "tof/cgl_model.hpp"
#include "tof/common.hpp"

#include <vector>

namespace tof {

// coupled: Neumann at x_min, v(x_max) = rho; unknowns (v_0 .. v_{n-2}, rho).
// neumann: Neumann at both ends on v and on v - rho; unknowns (v_0 .. v_{n-1}, rho).
enum class BoundaryScheme { coupled, neumann };

int coord_size(int n, BoundaryScheme bc);
int v_nodes(int n, BoundaryScheme bc);
Eigen::VectorXd to_coords(const ExtendedState& s, BoundaryScheme bc = BoundaryScheme::coupled);
ExtendedState from_coords(const Eigen::VectorXd& y, int n, BoundaryScheme bc = BoundaryScheme::coupled);

// Banded matrix of A d_xx + c d_x + S_omega on the v block and S_omega on the rho
// block, plus optional per-node 2x2 terms (one per v node) and a rho-block term.
RealBand assemble_linear(const CglParams& p, const Grid1D& grid, double c, double omega,
                         const std::vector<Mat2>* node_terms, const Mat2* rho_term,
                         BoundaryScheme bc = BoundaryScheme::coupled);

// Pointwise f on the v nodes and on rho, in coordinates.
Eigen::VectorXd nonlinear_coords(const CglParams& p, const Eigen::VectorXd& y);

}  // namespace tof
