#include "tof/spline.hpp"

#include <cmath>

namespace tof {

UniformSpline::UniformSpline(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), y_(std::move(values)), m_(y_.size(), 0.0) {
  const int n = grid_.n;
  const double h = grid_.h();
  // Thomas algorithm for M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  for (int i = 1; i < n - 1; ++i) {
    const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h * h);
    const double denom = 4.0 - (i > 1 ? cp[i - 1] : 0.0);
    cp[i] = 1.0 / denom;
    dp[i] = (rhs - (i > 1 ? dp[i - 1] : 0.0)) / denom;
  }
  for (int i = n - 2; i >= 1; --i) m_[i] = dp[i] - cp[i] * m_[i + 1];
}

double UniformSpline::operator()(double x) const {
  const int n = grid_.n;
  if (x <= grid_.x_min) return y_.front();
  if (x >= grid_.x_max) return y_.back();
  const double h = grid_.h();
  const double s = (x - grid_.x_min) / h;
  int i = static_cast<int>(std::floor(s));
  if (i >= n - 1) i = n - 2;
  const double t = s - i;
  if (t == 0.0) return y_[i];
  const double a = 1.0 - t, b = t;
  return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double UniformSpline::derivative(double x) const {
  const int n = grid_.n;
  if (x < grid_.x_min || x > grid_.x_max) return 0.0;
  const double h = grid_.h();
  const double s = (x - grid_.x_min) / h;
  int i = static_cast<int>(std::floor(s));
  if (i >= n - 1) i = n - 2;
  const double t = s - i;
  const double a = 1.0 - t, b = t;
  return (y_[i + 1] - y_[i]) / h + ((-3.0 * a * a + 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

namespace {
std::vector<double> component(const Eigen::VectorXd& v, int c) {
  std::vector<double> out(v.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[2 * i + c];
  return out;
}
}  // namespace

Eigen::VectorXd shift_field(const Grid1D& grid, const Eigen::VectorXd& v, double tau) {
  Eigen::VectorXd out(v.size());
  for (int c = 0; c < 2; ++c) {
    const UniformSpline sp(grid, component(v, c));
    for (int i = 0; i < grid.n; ++i) out[2 * i + c] = sp(grid.x(i) - tau);
  }
  return out;
}

Eigen::VectorXd resample_field(const Grid1D& from, const Eigen::VectorXd& v, const Grid1D& to) {
  Eigen::VectorXd out(2 * to.n);
  for (int c = 0; c < 2; ++c) {
    const UniformSpline sp(from, component(v, c));
    for (int i = 0; i < to.n; ++i) out[2 * i + c] = sp(to.x(i));
  }
  return out;
}

Eigen::VectorXd differentiate_field(const Grid1D& grid, const Eigen::VectorXd& v) {
  const int n = grid.n;
  const double h = grid.h();
  Eigen::VectorXd d(v.size());
  for (int c = 0; c < 2; ++c) {
    d[c] = (-3.0 * v[c] + 4.0 * v[2 + c] - v[4 + c]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) d[2 * i + c] = (v[2 * (i + 1) + c] - v[2 * (i - 1) + c]) / (2.0 * h);
    const int m = n - 1;
    d[2 * m + c] = (3.0 * v[2 * m + c] - 4.0 * v[2 * (m - 1) + c] + v[2 * (m - 2) + c]) / (2.0 * h);
  }
  return d;
}

}  // namespace tof
