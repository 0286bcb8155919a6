#include "tof/weight.hpp"

#include "tof/spline.hpp"

#include <cmath>
#include <sstream>

namespace tof {

void WeightSpec::validate(double mu_star) const {
  std::ostringstream os;
  if (!(mu >= 0.0)) os << "mu must be >= 0; ";
  if (!(mu_hat > 0.0)) os << "mu_hat must be > 0; ";
  if (mu > 0.0) {
    if (!(mu < 2.0 * mu_hat)) os << "need mu < 2 mu_hat; ";
    if (!(2.0 * mu_hat <= mu_star)) os << "need 2 mu_hat <= mu_star = " << mu_star << "; ";
  }
  if (!os.str().empty()) throw Error(ErrorKind::config, "weight", os.str());
}

double WeightSpec::eta(double x) const { return std::exp(mu * std::sqrt(x * x + 1.0)); }
double WeightSpec::vhat(double x) const { return 0.5 * std::tanh(mu_hat * x) + 0.5; }
double WeightSpec::dvhat(double x) const {
  const double c = std::cosh(mu_hat * x);
  return 0.5 * mu_hat / (c * c);
}

Eigen::VectorXd trapezoid_weights(const Grid1D& grid) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(grid.n, grid.h());
  w[0] *= 0.5;
  w[grid.n - 1] *= 0.5;
  return w;
}

double weighted_inner(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u, const ExtendedState& v,
                      int order) {
  if (u.nodes() != grid.n || v.nodes() != grid.n)
    throw Error(ErrorKind::domain, "grid-mismatch", "states do not live on the given grid");
  const Eigen::VectorXd q = trapezoid_weights(grid);
  double s = u.rho.dot(v.rho);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i), e = w.eta(x), vh = w.vhat(x);
    const Vec2 a = u.at(i) - vh * u.rho, b = v.at(i) - vh * v.rho;
    s += q[i] * e * e * a.dot(b);
  }
  if (order >= 1) {
    const Eigen::VectorXd du = differentiate_field(grid, u.v), dv = differentiate_field(grid, v.v);
    for (int i = 0; i < grid.n; ++i) {
      const double e = w.eta(grid.x(i));
      s += q[i] * e * e * (du[2 * i] * dv[2 * i] + du[2 * i + 1] * dv[2 * i + 1]);
    }
  }
  return s;
}

double norm_X(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u) {
  return std::sqrt(std::max(0.0, weighted_inner(w, grid, u, u, 0)));
}

double norm_X1(const WeightSpec& w, const Grid1D& grid, const ExtendedState& u) {
  return std::sqrt(std::max(0.0, weighted_inner(w, grid, u, u, 1)));
}

ExtendedState template_state(const WeightSpec& w, const Grid1D& grid, const Vec2& rho) {
  ExtendedState s(grid.n);
  for (int i = 0; i < grid.n; ++i) s.set(i, w.vhat(grid.x(i)) * rho);
  s.rho = rho;
  return s;
}

}  // namespace tof
