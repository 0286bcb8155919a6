#include "tof/discrete.hpp"

namespace tof {

int coord_size(int n, BoundaryScheme bc) { return bc == BoundaryScheme::coupled ? 2 * n : 2 * n + 2; }
int v_nodes(int n, BoundaryScheme bc) { return bc == BoundaryScheme::coupled ? n - 1 : n; }

Eigen::VectorXd to_coords(const ExtendedState& s, BoundaryScheme bc) {
  const int n = s.nodes(), nv = v_nodes(n, bc);
  Eigen::VectorXd y(coord_size(n, bc));
  y.head(2 * nv) = s.v.head(2 * nv);
  y.tail(2) = s.rho;
  return y;
}

ExtendedState from_coords(const Eigen::VectorXd& y, int n, BoundaryScheme bc) {
  const int nv = v_nodes(n, bc);
  ExtendedState s(n);
  s.v.head(2 * nv) = y.head(2 * nv);
  s.rho = y.tail(2);
  if (bc == BoundaryScheme::coupled) s.set(n - 1, s.rho);
  return s;
}

RealBand assemble_linear(const CglParams& p, const Grid1D& grid, double c, double omega,
                         const std::vector<Mat2>* node_terms, const Mat2* rho_term, BoundaryScheme bc) {
  const int n = grid.n, nv = v_nodes(n, bc);
  const double h = grid.h();
  const Mat2 A = p.A(), S = s_omega(omega), I = Mat2::Identity();
  const Mat2 J0 = -2.0 * A / (h * h) + S;
  const Mat2 Jm = A / (h * h) - c / (2.0 * h) * I;
  const Mat2 Jp = A / (h * h) + c / (2.0 * h) * I;
  RealBand M(coord_size(n, bc), 3, 3);
  auto add_block = [&](int bi, int bj, const Mat2& B) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (B(a, b) != 0.0) M.add(2 * bi + a, 2 * bj + b, B(a, b));
  };
  for (int i = 0; i < nv; ++i) {
    Mat2 d = J0;
    if (node_terms) d += (*node_terms)[i];
    add_block(i, i, d);
    if (i == 0) {
      add_block(0, 1, Jm + Jp);
    } else if (bc == BoundaryScheme::neumann && i == n - 1) {
      add_block(i, i - 1, Jm + Jp);
    } else {
      add_block(i, i - 1, Jm);
      // for the coupled scheme the right neighbour of node n-2 is the rho slot
      add_block(i, i + 1, Jp);
    }
  }
  Mat2 e = S;
  if (rho_term) e += *rho_term;
  add_block(nv, nv, e);
  return M;
}

Eigen::VectorXd nonlinear_coords(const CglParams& p, const Eigen::VectorXd& y) {
  Eigen::VectorXd out(y.size());
  for (int i = 0; i < y.size() / 2; ++i) out.segment<2>(2 * i) = f_eval(p, y.segment<2>(2 * i));
  return out;
}

}  // namespace tof
