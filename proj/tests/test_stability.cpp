#include <doctest.h>

#include "fixtures.hpp"
#include "tof/stability.hpp"

#include <cmath>
#include <numbers>

using namespace tof;
using tof::testing::real_alpha_disc;
using tof::testing::real_alpha_spectral;

namespace {

constexpr double kPi = std::numbers::pi;

const GroupOrbit& orbit() {
  static const GroupOrbit o(real_alpha_disc(), real_alpha_spectral());
  return o;
}

Perturbation mixed(double scale) {
  return bump_perturbation(real_alpha_disc(), -10.0, 5.0, Vec2(1.0, 0.5), 5e-3 * scale, Vec2(1e-3, 1e-3) * scale);
}

const DecompositionTrace& mixed_trace(int which) {
  static const DecompositionTrace full = run_experiment(orbit(), mixed(1.0), ExperimentConfig{});
  static const DecompositionTrace half = run_experiment(orbit(), mixed(0.5), ExperimentConfig{});
  return which == 0 ? full : half;
}

// smooth random coordinates with unit X_eta norm
Eigen::VectorXd random_coords(unsigned seed) {
  const Discretization& d = real_alpha_disc();
  const Eigen::VectorXd y = d.coords(tof::testing::smooth_random(d.grid, seed, 10.0, 15.0));
  return y / std::sqrt(d.inner(y, y));
}

}  // namespace

TEST_CASE("group metric") {
  CHECK(metric({0.0, 0.0}) == 0.0);
  CHECK(metric({2.0 * kPi, 0.0}) < 1e-15);
  CHECK(metric({kPi + 0.1, 1.5}) == doctest::Approx(kPi - 0.1 + 1.5).epsilon(1e-14));
  CHECK(metric({-kPi - 0.1, -1.5}) == doctest::Approx(kPi - 0.1 + 1.5).epsilon(1e-14));
  CHECK(canonical_angle(kPi) == doctest::Approx(kPi));
  CHECK(canonical_angle(-kPi) == doctest::Approx(kPi));
  const GroupElement c = compose({3.0, 1.0}, {0.5, -2.0});
  CHECK(c.theta == doctest::Approx(3.5 - 2.0 * kPi));
  CHECK(c.tau == doctest::Approx(-1.0));
}

TEST_CASE("group action") {
  const Discretization& d = real_alpha_disc();
  const ExtendedState u = orbit().profile_state();
  CHECK((act({0.0, 0.0}, d.grid, u).v - u.v).cwiseAbs().maxCoeff() < 1e-13);

  const GroupElement g1{0.4, 1.37}, g2{-1.1, -2.71};
  const ExtendedState a = act(g1, d.grid, act(g2, d.grid, u));
  const ExtendedState b = act(compose(g1, g2), d.grid, u);
  CHECK((a.v - b.v).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((a.rho - b.rho).norm() < 1e-15);

  // a(h) v - v + h1 S1 v + h2 v_x = o(|h|)
  ExtendedState gen(d.grid.n);
  for (int i = 0; i < d.grid.n; ++i) gen.set(i, s1() * u.at(i));
  gen.rho = s1() * u.rho;
  ExtendedState dx(d.grid.n);
  dx.v = d.profile.dv;
  std::vector<double> ratios;
  for (double h : {4e-2, 2e-2, 1e-2}) {
    const ExtendedState e = act({h, h}, d.grid, u) - u + h * gen + h * dx;
    ratios.push_back(norm_X(d.weight, d.grid, e) / (2.0 * h));
  }
  CHECK(ratios[1] < 0.6 * ratios[0]);
  CHECK(ratios[2] < 0.6 * ratios[1]);
}

TEST_CASE("decomposition of orbit points and small perturbations") {
  const GroupOrbit& o = orbit();
  const Discretization& d = o.disc();
  const SpectralData& sd = o.spectral();
  const Eigen::VectorXd star = d.coords(o.profile_state());

  const Decomposition d0 = o.decompose(star);
  CHECK(metric(d0.z) < 1e-12);
  CHECK(o.norm_x1(d0.w) < 1e-10);

  const GroupElement g0{0.3, 1.7};
  const Decomposition d1 = o.decompose(o.orbit_point(g0));
  CHECK(std::abs(d1.z.theta - g0.theta) < 1e-10);
  CHECK(std::abs(d1.z.tau - g0.tau) < 1e-10);
  CHECK(o.norm_x1(d1.w) < 1e-10);

  // theta is continued past pi rather than wrapped
  const Decomposition d2 = o.decompose(o.orbit_point({3.3, 0.0}), {3.1, 0.0});
  CHECK(d2.z.theta == doctest::Approx(3.3).epsilon(1e-10));

  // the exact group action of the grid data agrees up to interpolation error
  const ExtendedState shifted = act(g0, d.grid, o.profile_state());
  const Decomposition d3 = o.decompose(d.coords(shifted));
  CHECK(metric(difference(d3.z, g0)) < 1e-6);

  const Eigen::VectorXd r = random_coords(17);
  const Eigen::VectorXd q = r - project(sd, r);
  for (double eps : {1e-3, 5e-4}) {
    const Decomposition dp = o.decompose(star + eps * q);
    CHECK(metric(dp.z) < 10.0 * eps * eps);
    CHECK(o.norm_x(dp.w - eps * q) < 10.0 * eps * eps);
    CHECK(dp.orth[0] < 1e-8);
    CHECK(dp.orth[1] < 1e-8);
  }

  CHECK_THROWS_AS(o.decompose(star + 1e3 * sd.phi1), Error);
}

TEST_CASE("reduced system at the profile") {
  const GroupOrbit& o = orbit();
  const Discretization& d = o.disc();
  CHECK((o.m_matrix({0.0, 0.0}) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d.size());
  for (const GroupElement& z : {GroupElement{0.0, 0.0}, GroupElement{0.7, -3.0}})
    CHECK(o.remainder_rf(z, zero).cwiseAbs().maxCoeff() == 0.0);
  const ReducedRhs rr = o.reduced_rhs({0.0, 0.0}, zero);
  CHECK(rr.theta_dot == 0.0);
  CHECK(rr.tau_dot == 0.0);
  CHECK(rr.w_dot.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("remainder is quadratic in w and Lipschitz in z") {
  const GroupOrbit& o = orbit();
  const Eigen::VectorXd w = random_coords(23);
  std::vector<double> ratio;
  for (double eps : {1e-2, 5e-3, 2.5e-3})
    ratio.push_back(o.norm_x1(o.remainder_rf({0.0, 0.0}, eps * w)) / (eps * eps));
  for (double v : ratio) CHECK(std::abs(v / ratio[0] - 1.0) < 0.1);

  const Eigen::VectorXd w2 = 1e-2 * w;
  const double l1 = lipschitz_estimate(o, {0.1, 0.5}, w2, 1e-3);
  const double l2 = lipschitz_estimate(o, {0.1, 0.5}, w2, 5e-4);
  CHECK(l1 > 0.0);
  CHECK(std::abs(l1 / l2 - 1.0) < 0.1);
}

TEST_CASE("experiment without perturbation") {
  Perturbation none;
  none.localized = ExtendedState(real_alpha_disc().grid.n);
  ExperimentConfig cfg;
  cfg.t_end = 5.0;
  const DecompositionTrace tr = run_experiment(orbit(), none, cfg);
  CHECK(tr.v0_norm == 0.0);
  for (std::size_t k = 0; k < tr.times.size(); ++k) CHECK(metric(tr.z[k]) < 1e-9);
  CHECK(metric(tr.gamma_inf) < 1e-9);
  CHECK(tr.w_norm.front() < 1e-13);
}

TEST_CASE("experiment with a pure reparametrization") {
  const GroupOrbit& o = orbit();
  const Discretization& d = o.disc();
  const GroupElement g0{0.002, 0.003};
  Perturbation p;
  p.localized = d.state(o.orbit_point(g0)) - o.profile_state();
  ExperimentConfig cfg;
  cfg.t_end = 10.0;
  cfg.eps0 = 0.1;
  const DecompositionTrace tr = run_experiment(o, p, cfg);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(tr.w_norm[k] < 1e-6 * tr.v0_norm);
    CHECK(metric(difference(tr.z[k], g0)) < 1e-6 * metric(g0));
  }
  CHECK(metric(difference(tr.gamma_inf, g0)) < 1e-6 * metric(g0));
}

TEST_CASE("mixed perturbation decays exponentially") {
  const DecompositionTrace& tr = mixed_trace(0);
  const SpectralData& sd = real_alpha_spectral();
  CHECK(tr.beta_r2 > 0.98);
  CHECK(tr.beta_fit >= 0.5 * sd.gap);
  CHECK(tr.beta_fit <= 1.5 * sd.gap);
  CHECK(tr.t_fit_end > tr.t_fit_start);
  for (const auto& r : tr.orth) {
    CHECK(r[0] < 1e-8);
    CHECK(r[1] < 1e-8);
  }
  CHECK(tr.gamma_rate >= 0.5 * tr.beta_fit);
}

TEST_CASE("asymptotic phase and amplitude scale with the perturbation") {
  const DecompositionTrace& full = mixed_trace(0);
  const DecompositionTrace& half = mixed_trace(1);
  CHECK(half.v0_norm == doctest::Approx(0.5 * full.v0_norm).epsilon(1e-12));
  CHECK(std::abs(half.gamma_ratio / full.gamma_ratio - 1.0) < 0.3);
  const double sup_full = *std::max_element(full.w_norm.begin(), full.w_norm.end());
  const double sup_half = *std::max_element(half.w_norm.begin(), half.w_norm.end());
  CHECK(std::abs(sup_half / sup_full - 0.5) < 0.15);
}

TEST_CASE("oversized perturbation is rejected") {
  CHECK_THROWS_AS(run_experiment(orbit(), mixed(200.0), ExperimentConfig{}), Error);
  try {
    run_experiment(orbit(), mixed(200.0), ExperimentConfig{});
  } catch (const Error& e) {
    CHECK(e.code() == "decomposition-failure");
  }
}

TEST_CASE("reduced system agrees with direct simulation") {
  const GroupOrbit& o = orbit();
  const ExtendedState u0 = o.profile_state() + perturbation_state(real_alpha_disc(), mixed(2.0));
  const ReducedComparison cmp = compare_reduced_direct(o, u0, 1.0, 1e-3, 0.1);
  CHECK(cmp.times.size() == 10);
  CHECK(cmp.max_rel_error < 0.05);
}
