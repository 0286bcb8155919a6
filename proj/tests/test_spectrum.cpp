#include <doctest.h>

#include "tof/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tof;

namespace {

constexpr double c_ref = 1.2900343417;

SpectralContext real_alpha_ctx() {
  const CglParams p = CglParams::real_alpha();
  const RestState r = rest_state(p);
  return make_context(p, Frame{c_ref, r.omega, r.v_inf});
}

SpectralContext complex_alpha_ctx() {
  const CglParams p = CglParams::complex_alpha();
  const RestState r = rest_state(p);
  return make_context(p, Frame{1.35, r.omega, r.v_inf});
}

// det(sI - D) of a 2x2 complex matrix
cplx det_residual(const SpectralContext& ctx, cplx s, double nu, double mu, Side side) {
  const Mat2c D = dispersion_matrix(ctx, nu, mu, side);
  return (s - D(0, 0)) * (s - D(1, 1)) - D(0, 1) * D(1, 0);
}

// det(lambda^2 A + lambda B + C - sI) assembled from the limit matrices
cplx quadratic_residual(const SpectralContext& ctx, cplx lambda, cplx s, double mu, Side side) {
  const LimitMatrices lm = limit_matrices(ctx, mu, side);
  const Mat2c Q = lambda * lambda * ctx.params.A().cast<cplx>() + lambda * lm.B.cast<cplx>() +
                  lm.C.cast<cplx>() - s * Mat2c::Identity();
  return Q.determinant();
}

}  // namespace

TEST_CASE("limit matrices") {
  const SpectralContext ctx = real_alpha_ctx();
  const Mat2 A = ctx.params.A(), I = Mat2::Identity();
  const LimitMatrices m0 = limit_matrices(ctx, 0.0, Side::minus);
  CHECK((m0.B - c_ref * I).norm() == 0.0);
  CHECK((m0.C - (s_omega(ctx.frame.omega) + as_matrix(g_eval(ctx.params, 0.0, 0)))).norm() < 1e-15);

  // the first-order coefficient of eta L eta^{-1} is c - 2 (eta'/eta) A, and eta'/eta -> +-mu
  const LimitMatrices p5 = limit_matrices(ctx, 0.05, Side::plus);
  CHECK((p5.B - (c_ref * I - 0.1 * A)).norm() < 1e-15);
  CHECK(p5.B(0, 0) == doctest::Approx(1.1900343417).epsilon(1e-12));
  const LimitMatrices m5 = limit_matrices(ctx, 0.05, Side::minus);
  CHECK((m5.B - (c_ref * I + 0.1 * A)).norm() < 1e-15);

  const LimitMatrices p0 = limit_matrices(ctx, 0.0, Side::plus);
  for (double mu : {0.01, 0.05, 0.3}) {
    const LimitMatrices pm = limit_matrices(ctx, mu, Side::plus);
    CHECK(((pm.C - p0.C) - (mu * mu * A - c_ref * mu * I)).norm() < 1e-14);
  }
}

TEST_CASE("minus dispersion relation") {
  const SpectralContext ctx = real_alpha_ctx();
  const auto [s, partner] = disp_minus(ctx, 0.0, 0.0);
  CHECK(s.real() == doctest::Approx(-0.125).epsilon(1e-14));
  CHECK(s.imag() == doctest::Approx(-1.5821067).epsilon(1e-7));
  CHECK(std::abs(partner - std::conj(s)) < 1e-15);
  const double g10 = g_eval(ctx.params, 0.0, 0).re;
  for (int k = -200; k <= 200; ++k) {
    const auto pr = disp_minus(ctx, 0.05 * k, 0.0);
    CHECK(pr.first.real() <= g10);
    CHECK(pr.second.real() <= g10);
  }
}

TEST_CASE("plus dispersion relation at the origin") {
  const SpectralContext ctx = real_alpha_ctx();
  const DispersionSample ds = disp_plus(ctx, 0.0, 0.0);
  const double y = ctx.rest.y_inf;
  const double rho1 = (1.0 - 2.0 * y) * y;
  CHECK(ds.rho1 == doctest::Approx(rho1).epsilon(1e-14));
  CHECK(std::abs(ds.s_branches[0]) < 1e-15);
  CHECK(ds.s_branches[1].real() == doctest::Approx(2.0 * rho1).epsilon(1e-14));
  CHECK(ds.s_branches[1].real() == doctest::Approx(-1.2071068).epsilon(1e-7));
}

TEST_CASE("dispersion values annihilate the determinant") {
  const SpectralContext ctx = real_alpha_ctx();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> N(-4.0, 4.0), M(0.0, 0.3);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double nu = N(rng), mu = M(rng);
    for (Side side : {Side::plus, Side::minus})
      for (const cplx& s : dispersion_values(ctx, nu, mu, side))
        worst = std::max(worst, std::abs(det_residual(ctx, s, nu, mu, side)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("quadratic contact at the origin") {
  const SpectralContext ctx = real_alpha_ctx();
  const QuadraticContact qc = quadratic_contact(ctx);
  CHECK(qc.curvature == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(qc.value_at_0 < 1e-15);
  CHECK(qc.is_max);
  const double h = 1e-3;
  auto r = [&](double nu) { return disp_plus(ctx, nu, 0.0).s_branches[0].real(); };
  const double fd = (r(h) - 2.0 * r(0.0) + r(-h)) / (h * h);
  CHECK(std::abs(fd - qc.curvature) < 1e-4);

  try {
    quadratic_contact(complex_alpha_ctx());
    FAIL("expected a4-violated");
  } catch (const Error& e) {
    CHECK(e.code() == "a4-violated");
    CHECK(e.kind() == ErrorKind::assumption);
  }
}

TEST_CASE("Taylor expansion of the critical curve") {
  const SpectralContext ctx = real_alpha_ctx();
  const double curv = quadratic_contact(ctx).curvature;
  auto ratio = [&](double nu, double mu) {
    const cplx s = disp_plus(ctx, nu, mu).s_branches[0];
    const cplx t = cplx(0.0, c_ref * nu) - c_ref * mu + 0.5 * curv * nu * nu;
    return std::abs(s - t) / (std::pow(std::abs(nu), 3) + mu * std::abs(nu) + mu * mu);
  };
  const double C1 = ratio(0.1, 0.01), C2 = ratio(0.05, 0.005), C3 = ratio(0.025, 0.0025);
  CHECK(C2 < 2.0 * C1);
  CHECK(C3 < 2.0 * C2);
  CHECK(C3 > 0.5 * C2);
}

TEST_CASE("m_matrix structure and spatial eigenvalues") {
  const SpectralContext ctx = real_alpha_ctx();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-3.0, 3.0), M(0.0, 0.2);
  for (int k = 0; k < 50; ++k) {
    const cplx s(U(rng), U(rng));
    const double mu = M(rng);
    for (Side side : {Side::plus, Side::minus}) {
      const Mat4c m = m_matrix(ctx, s, mu, side);
      CHECK(m.block<2, 2>(0, 0).norm() == 0.0);
      CHECK((m.block<2, 2>(0, 2) - Mat2c::Identity()).norm() == 0.0);
      const std::vector<cplx> dense = spatial_eigenvalues_dense(ctx, s, mu, side);
      bool ok = false;
      const std::vector<cplx> quart = spatial_eigenvalues_quartic(ctx, s, mu, side, &ok);
      CHECK(ok);
      for (const cplx& l : dense) {
        CHECK(std::abs(quadratic_residual(ctx, l, s, mu, side)) < 1e-9 * (1.0 + std::pow(std::abs(l), 4)));
        double best = 1e300;
        for (const cplx& q : quart) best = std::min(best, std::abs(q - l));
        CHECK(best < 1e-9 * (1.0 + std::abs(l)));
      }
    }
  }

  // a point of the dispersion set has the spatial eigenvalue i nu0
  const double nu0 = 0.7, mu = 0.05;
  const cplx s = disp_plus(ctx, nu0, mu).s_branches[0];
  const Eigen::ComplexEigenSolver<Mat4c> es(m_matrix(ctx, s, mu, Side::plus));
  double best = 1e300;
  for (int i = 0; i < 4; ++i) best = std::min(best, std::abs(es.eigenvalues()[i] - cplx(0.0, nu0)));
  CHECK(best < 1e-9);
}

TEST_CASE("stable dimension") {
  const SpectralContext ctx = real_alpha_ctx();
  for (Side side : {Side::plus, Side::minus}) CHECK(stable_dim(ctx, cplx(10.0, 0.0), 0.0, side) == 2);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const cplx s(U(rng), U(rng));
    for (Side side : {Side::plus, Side::minus})
      CHECK(stable_dim(ctx, s, 0.05, side) == stable_dim(ctx, std::conj(s), 0.05, side));
  }
  const cplx on = disp_minus(ctx, 1.3, 0.0).first;
  try {
    stable_dim(ctx, on, 0.0, Side::minus);
    FAIL("expected non-hyperbolic");
  } catch (const Error& e) {
    CHECK(e.code() == "non-hyperbolic");
  }
}

TEST_CASE("Fredholm index at sample points") {
  const SpectralContext ctx = real_alpha_ctx();
  const IndexResult far = fredholm_index(ctx, cplx(10.0, 0.0), 0.0);
  CHECK_FALSE(far.on_essential);
  CHECK(far.index == 0);
  CHECK(fredholm_index(ctx, 0.0, 0.0).on_essential);
  const IndexResult w = fredholm_index(ctx, 0.0, 0.05);
  CHECK_FALSE(w.on_essential);
  CHECK(w.index == 0);
  CHECK(w.m_plus == stable_dim(ctx, 0.0, 0.05, Side::plus));
  CHECK(w.m_minus == stable_dim(ctx, 0.0, 0.05, Side::minus));
}

TEST_CASE("index map of the reference window") {
  const SpectralContext ctx = real_alpha_ctx();
  const int n = 81;
  const IndexMap map = map_region(ctx, 0.0, Window{}, n);
  int regular = 0, on_curve = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const IndexCell& a = map.at(i, j);
      const IndexCell& b = map.at(i, n - 1 - j);
      CHECK(a.status == b.status);
      if (a.status == CellStatus::regular) {
        ++regular;
        CHECK(a.index == b.index);
        CHECK(a.index == a.m_plus - a.m_minus);
      } else {
        ++on_curve;
      }
    }
  }
  CHECK(regular > 0);
  CHECK(on_curve > 0);

  // flood fill of the component containing the right edge
  std::vector<int> seen(static_cast<std::size_t>(n) * n, 0), stack;
  for (int j = 0; j < n; ++j)
    if (map.at(n - 1, j).status == CellStatus::regular) stack.push_back(j * n + n - 1);
  int nonzero = 0, visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = 1;
    ++visited;
    const int i = id % n, j = id / n;
    if (map.at(i, j).index != 0) ++nonzero;
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int a = i + di[k], b = j + dj[k];
      if (a < 0 || b < 0 || a >= n || b >= n) continue;
      if (map.at(a, b).status == CellStatus::regular && !seen[b * n + a]) stack.push_back(b * n + a);
    }
  }
  CHECK(visited > n);
  CHECK(nonzero == 0);

  // index is constant along straight paths of regular cells
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> P(0, n - 1), D(-1, 1), L(2, 30);
  int tested = 0;
  for (int k = 0; k < 1000; ++k) {
    int i = P(rng), j = P(rng);
    const int di = D(rng), dj = D(rng), len = L(rng);
    if (di == 0 && dj == 0) continue;
    std::vector<int> idx;
    bool clean = true;
    for (int s = 0; s < len; ++s, i += di, j += dj) {
      if (i < 0 || j < 0 || i >= n || j >= n || map.at(i, j).status != CellStatus::regular) {
        clean = false;
        break;
      }
      idx.push_back(map.at(i, j).index);
    }
    if (!clean) continue;
    ++tested;
    for (int v : idx) CHECK(v == idx.front());
  }
  CHECK(tested > 50);
}

TEST_CASE("index map right of all curves is zero") {
  const SpectralContext ctx = real_alpha_ctx();
  const IndexMap map = map_region(ctx, 0.05, Window{0.2, 1.0, -1.0, 1.0}, 21);
  for (const IndexCell& c : map.cells) {
    CHECK(c.status == CellStatus::regular);
    CHECK(c.index == 0);
  }
  CHECK_THROWS_AS(map_region(ctx, 0.0, Window{1.0, 1.0, -1.0, 1.0}, 10), Error);
}

TEST_CASE("weighted critical curve moves left") {
  const SpectralContext ctx = real_alpha_ctx();
  CHECK(std::abs(max_real_part(ctx, 0.0, Side::plus)) < 1e-12);
  for (double mu : {0.01, 0.02, 0.05}) {
    CHECK(max_real_part(ctx, mu, Side::plus) <= -c_ref * mu / 2.0);
    CHECK(essential_gap(ctx, mu) > 0.0);
  }
}

TEST_CASE("sector fit in the weighted space") {
  const SpectralContext ctx = real_alpha_ctx();
  const double mu = 0.05;
  const Sector sec = fit_sector(ctx, mu);
  CHECK(sec.beta == doctest::Approx(c_ref / 2.0).epsilon(1e-15));
  CHECK(sec.eps > 0.0);
  CHECK(sec.min_distance > 0.0);

  // independent check: boundary samples against finely sampled curves
  std::vector<cplx> curve;
  int inside = 0;
  for (int k = -8000; k <= 8000; ++k)
    for (Side side : {Side::plus, Side::minus})
      for (const cplx& s : dispersion_values(ctx, 1e-3 * k, mu, side)) {
        curve.push_back(s);
        if (in_sector(sec, s) || in_sector(sec, std::conj(s))) ++inside;
      }
  CHECK(inside == 0);
  const double ang = std::numbers::pi / 2 + sec.eps * mu;
  double dmin = 1e300;
  for (int k = 0; k < 400; ++k) {
    const double t = 0.05 * (k + 0.5);
    for (double sg : {-1.0, 1.0}) {
      const cplx b = cplx(-sec.beta * mu, 0.0) + t * std::polar(1.0, sg * ang);
      for (const cplx& s : curve) dmin = std::min(dmin, std::abs(b - s));
    }
  }
  CHECK(dmin > 0.0);
}

TEST_CASE("rounded sector without weight") {
  const SpectralContext ctx = real_alpha_ctx();
  const Sector sec = fit_sector(ctx, 0.0);
  const Vec2 rho = rho_coefficients(ctx.params, ctx.rest);
  const double kref = std::abs(rho[0] * ctx.params.alpha.re + rho[1] * ctx.params.alpha.im) /
                      (4.0 * c_ref * c_ref * std::abs(rho[0]));
  CHECK(sec.kappa == doctest::Approx(kref).epsilon(1e-15));
  CHECK(sec.eps > 0.0);
  CHECK_FALSE(sec.notes.empty());
  CHECK_THROWS_AS(fit_sector(complex_alpha_ctx(), 0.05), Error);
}
