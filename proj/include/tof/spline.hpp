#pragma once

#include "tof/common.hpp"

#include <vector>

namespace tof {

// Natural cubic spline on a uniform grid, constant extrapolation outside.
class UniformSpline {
 public:
  UniformSpline(const Grid1D& grid, std::vector<double> values);
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  Grid1D grid_;
  std::vector<double> y_, m_;
};

// Samples of each component of the interleaved field v at x - tau.
Eigen::VectorXd shift_field(const Grid1D& grid, const Eigen::VectorXd& v, double tau);
// Interleaved field resampled from one grid onto another.
Eigen::VectorXd resample_field(const Grid1D& from, const Eigen::VectorXd& v, const Grid1D& to);
// Second-order central differences, one-sided second-order at the ends.
Eigen::VectorXd differentiate_field(const Grid1D& grid, const Eigen::VectorXd& v);

}  // namespace tof
