#pragma once

#include "tof/operator.hpp"
#include "tof/profile.hpp"
#include "tof/spline.hpp"

#include <random>

namespace tof::testing {

inline const Profile& real_alpha_profile() {
  static const Profile prof = [] {
    const CglParams p = CglParams::real_alpha();
    return compute_profile(p, rest_state(p), Grid1D::make(-100.0, 100.0, 2000));
  }();
  return prof;
}

inline Profile real_alpha_profile_on(const Grid1D& g) {
  const CglParams p = CglParams::real_alpha();
  const Profile& base = real_alpha_profile();
  ProfileGuess guess;
  guess.c0 = base.frame.c;
  guess.grid = g;
  guess.v0 = resample_field(base.grid, base.v, g);
  return solve_profile(p, rest_state(p), guess);
}

inline const Discretization& real_alpha_disc() {
  static const Discretization d = assemble(CglParams::real_alpha(), real_alpha_profile(), WeightSpec{0.05, 0.2});
  return d;
}

inline const SpectralData& real_alpha_spectral() {
  static const SpectralData sd = eig_near_zero(real_alpha_disc(), 8);
  return sd;
}

// Gaussian-smoothed white noise (sigma in nodes) under a Gaussian envelope of the given width.
inline ExtendedState smooth_random(const Grid1D& g, unsigned seed, double sigma_nodes, double width,
                                   double center = 0.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd raw(2 * g.n);
  for (int i = 0; i < raw.size(); ++i) raw[i] = nd(rng);
  ExtendedState s(g.n);
  const int r = static_cast<int>(4 * sigma_nodes);
  for (int i = 0; i < g.n; ++i) {
    Vec2 acc = Vec2::Zero();
    double wsum = 0.0;
    for (int k = std::max(0, i - r); k <= std::min(g.n - 1, i + r); ++k) {
      const double w = std::exp(-0.5 * (k - i) * (k - i) / (sigma_nodes * sigma_nodes));
      acc += w * Vec2(raw[2 * k], raw[2 * k + 1]);
      wsum += w;
    }
    const double x = g.x(i) - center;
    s.set(i, std::exp(-x * x / (width * width)) * acc / wsum);
  }
  s.rho = Vec2(nd(rng), nd(rng)) * 0.1;
  return s;
}

}  // namespace tof::testing
