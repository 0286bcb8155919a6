// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include "fixtures.hpp"
#include "tof/config.hpp"
#include "tof/spectrum.hpp"
#include "tof/stability.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace tof;

namespace {

const std::string kConfigs = TOFLAB_CONFIG_DIR;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s [%2d] %s: %s; %.3f s (budget %g s%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              secs, budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Shared {
  RunConfig real_alpha = load_config(kConfigs + "/real_alpha.ini");
  RunConfig complex_alpha = load_config(kConfigs + "/complex_alpha.ini");
};

const Shared& shared() {
  static const Shared s;
  return s;
}

const GroupOrbit& orbit() {
  static const GroupOrbit o(tof::testing::real_alpha_disc(), tof::testing::real_alpha_spectral());
  return o;
}

SpectralContext real_alpha_ctx() {
  const Profile& prof = tof::testing::real_alpha_profile();
  return make_context(CglParams::real_alpha(), prof.frame);
}

TimeSeries lab_run(const RunConfig& cfg) {
  SimConfig sc;
  sc.grid = cfg.grid;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  sc.snapshot_stride = 10;
  sc.frame = SimFrame{FrameKind::lab, 0.0, 0.0};
  sc.weight = cfg.weight;
  return simulate(cfg.params, sc, sigmoid_state(cfg.grid, cfg.weight, cfg.init_amplitude, cfg.init_x0));
}

Perturbation experiment_perturbation(double scale) {
  const ExperimentSpec& e = shared().real_alpha.experiment;
  return bump_perturbation(tof::testing::real_alpha_disc(), e.bump_center, e.bump_width, e.bump_dir, e.bump_norm * scale,
                           e.rho0 * scale);
}

}  // namespace

int main() {
  const double pi = std::numbers::pi;

  criterion(1, "rest state", 1e-3, [] {
    const CglParams p = CglParams::real_alpha();
    const RestState r = rest_state(p);
    const double y = (1.0 + std::sqrt(0.5)) / 2.0;
    const Complex2 g = g_eval(p, r.y_inf, 0);
    const double res = std::hypot(g.re, r.omega + g.im);
    const double fres = (s_omega(r.omega) * r.v_inf + f_eval(p, r.v_inf)).norm();
    const double err = std::abs(r.y_inf - y);
    return Outcome{err < 1e-12 && res < 1e-12 && fres < 1e-12,
                   "|y_inf - (1+sqrt(1/2))/2| = " + fmt("%.2e", err) + ", residual " + fmt("%.2e", std::max(res, fres)) +
                       ", omega = " + fmt("%.10f", r.omega)};
  });

  criterion(2, "quadratic contact", 1.0, [] {
    const CglParams p = CglParams::real_alpha();
    const RestState r = rest_state(p);
    const SpectralContext ctx = make_context(p, Frame{1.2900343417, r.omega, r.v_inf});
    const double s0 = std::abs(disp_plus(ctx, 0.0, 0.0).s_branches[0]);
    const QuadraticContact qc = quadratic_contact(ctx, 5.0, 20001);
    auto re = [&](double nu) { return disp_plus(ctx, nu, 0.0).s_branches[0].real(); };
    auto d2 = [&](double h) { return (re(h) - 2.0 * re(0.0) + re(-h)) / (h * h); };
    const double fd = (4.0 * d2(5e-3) - d2(1e-2)) / 3.0;
    const double e_formula = std::abs(qc.curvature + 2.0 * p.alpha.re);
    const double e_fd = std::abs(fd - qc.curvature);
    return Outcome{s0 < 1e-12 && e_formula < 1e-8 && e_fd < 1e-8 && qc.is_max,
                   "|s+(0,0)| = " + fmt("%.2e", s0) + ", curvature " + fmt("%.12f", qc.curvature) + " (fd gap " +
                       fmt("%.2e", e_fd) + "), unique max at 0: " + (qc.is_max ? "yes" : "no")};
  });

  criterion(3, "Fredholm index map 200x200, mu = 0", 60.0, [] {
    const CglParams p = CglParams::real_alpha();
    const RestState r = rest_state(p);
    const SpectralContext ctx = make_context(p, Frame{1.2900343417, r.omega, r.v_inf});
    const int n = 200;
    const IndexMap map = map_region(ctx, 0.0, Window{-2.0, 1.0, -4.0, 4.0}, n);
    const IndexResult far = fredholm_index(ctx, 10.0, 0.0);
    const bool origin = fredholm_index(ctx, 0.0, 0.0).on_essential;
    int asym = 0, jumps = 0, right_nonzero = 0, regular = 0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const IndexCell& a = map.at(i, j);
        const IndexCell& b = map.at(i, n - 1 - j);
        if (a.status != b.status || (a.status == CellStatus::regular && a.index != b.index)) ++asym;
        if (a.status != CellStatus::regular) continue;
        ++regular;
        if (i == n - 1 && a.index != 0) ++right_nonzero;
        // neighbours along rows, columns and diagonals
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{1, -1}}) {
          const int x = i + di, y = j + dj;
          if (x >= n || y < 0 || y >= n) continue;
          const IndexCell& c = map.at(x, y);
          if (c.status == CellStatus::regular && c.index != a.index) ++jumps;
        }
      }
    }
    const bool ok = !far.on_essential && far.index == 0 && origin && asym == 0 && jumps == 0 && right_nonzero == 0;
    std::ostringstream os;
    os << "index(10) = " << far.index << ", s = 0 on essential spectrum: " << (origin ? "yes" : "no")
       << ", regular cells " << regular << ", index jumps between regular neighbours " << jumps
       << ", asymmetric cells " << asym << ", nonzero on right edge " << right_nonzero;
    return Outcome{ok, os.str()};
  });

  criterion(4, "weight shift of the critical curve", 5.0, [] {
    const SpectralContext ctx = real_alpha_ctx();
    const double c = ctx.frame.c;
    bool ok = true;
    std::ostringstream os;
    for (double mu : {0.01, 0.02, 0.05}) {
      const double m = max_real_part(ctx, mu, Side::plus);
      ok = ok && m <= -c * mu / 2.0;
      if (mu > 0.01) os << "; ";
      os << "mu " << mu << ": max Re " << fmt("%.5f", m) << " vs " << fmt("%.5f", -c * mu / 2.0);
    }
    return Outcome{ok, os.str()};
  });

  criterion(5, "discrete kernel, mu = 0.05", 120.0, [] {
    const Discretization& d = tof::testing::real_alpha_disc();
    const SpectralData& sd = tof::testing::real_alpha_spectral();
    int kernel = 0;
    bool others_left = true;
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
      if (sd.classes[k] == EigClass::kernel) kernel += std::abs(sd.eigenvalues[k]) < sd.kernel_tol;
      else others_left = others_left && sd.eigenvalues[k].real() < 0.0;
    }
    std::vector<KernelResidual> res;
    for (int n : {1000, 2000, 4000}) {
      const Profile pr = n == 2000 ? tof::testing::real_alpha_profile()
                                   : tof::testing::real_alpha_profile_on(Grid1D::make(-100.0, 100.0, n));
      res.push_back(kernel_residuals(assemble(d.params, pr, d.weight)));
    }
    const double o1 = std::log2(res[0].phi1 / res[1].phi1), o2 = std::log2(res[1].phi1 / res[2].phi1);
    const double phi2_max = std::max({res[0].phi2, res[1].phi2, res[2].phi2});
    const bool ok = sd.kernel_count == 2 && kernel == 2 && sd.kernel_angle < 1e-2 && others_left && sd.gap > 0.0 &&
                    o1 >= 1.9 && o2 >= 1.9 && phi2_max < 1e-8;
    std::ostringstream os;
    os << "kernel eigenvalues " << kernel << " (tol " << fmt("%.3g", sd.kernel_tol) << "), angle "
       << fmt("%.2e", sd.kernel_angle) << ", gap " << fmt("%.5f", sd.gap) << ", phi1 residual orders "
       << fmt("%.3f", o1) << "/" << fmt("%.3f", o2) << ", phi2 residual " << fmt("%.1e", phi2_max)
       << " (exact discrete symmetry)";
    return Outcome{ok, os.str()};
  });

  criterion(6, "semigroup decay", 60.0, [] {
    const Discretization& d = tof::testing::real_alpha_disc();
    const SpectralData& sd = tof::testing::real_alpha_spectral();
    const ExtendedState w0 = tof::testing::smooth_random(d.grid, 11, 20.0, 20.0);
    const DecayFit fit = semigroup_decay(d, sd, w0, 40.0, 0.05);
    const DecayFit ker = semigroup_decay(d, sd, d.state(sd.phi1), 20.0, 0.05, false);
    const double rel = std::abs(fit.nu - sd.gap) / sd.gap;
    return Outcome{rel < 0.2 && std::abs(ker.nu) < 1e-3,
                   "nu " + fmt("%.5f", fit.nu) + " vs gap " + fmt("%.5f", sd.gap) + " (rel " + fmt("%.3f", rel) +
                       "), kernel slope " + fmt("%.1e", -ker.nu)};
  });

  criterion(7, "complex alpha simulation", 120.0, [] {
    const RunConfig& cfg = shared().complex_alpha;
    const TimeSeries ts = lab_run(cfg);
    const RateSummary rs = observables(ts);
    const AssumptionReport rep = check_assumptions(cfg.params, rest_state(cfg.params));
    const bool ok = rs.has_front && rs.c_drift < 0.01 && rs.omega_drift < 0.01 && !rep.a4_ok;
    std::ostringstream os;
    os << "front " << (rs.has_front ? "formed" : "missing") << ", c_est " << fmt("%.5f", rs.c_est) << " (drift "
       << fmt("%.1e", rs.c_drift) << "), omega_est " << fmt("%.5f", rs.omega_est) << " (drift "
       << fmt("%.1e", rs.omega_drift) << "), a4_ok " << (rep.a4_ok ? "true" : "false") << " (a4 value "
       << fmt("%.4f", rep.a4_value) << ")";
    return Outcome{ok, os.str()};
  });

  criterion(8, "profile vs simulation", 120.0, [] {
    const Profile& prof = tof::testing::real_alpha_profile();
    RunConfig cfg = shared().complex_alpha;
    cfg.params = CglParams::real_alpha();
    const RateSummary rs = observables(lab_run(cfg));
    const double rel = std::abs(rs.c_est - prof.frame.c) / prof.frame.c;
    const TailRates tr = tail_rates(prof);
    const double tail = std::min(tr.left, tr.right);
    const bool ok = rs.has_front && rel < 1e-2 && prof.residual < 1e-8 && tail >= 0.95 * prof.mu_star;
    std::ostringstream os;
    os << "c profile " << fmt("%.8f", prof.frame.c) << ", c simulation " << fmt("%.8f", rs.c_est) << " (rel "
       << fmt("%.1e", rel) << "), residual " << fmt("%.1e", prof.residual) << ", tail rate " << fmt("%.4f", tail)
       << " vs mu_star " << fmt("%.4f", prof.mu_star);
    return Outcome{ok, os.str()};
  });

  criterion(9, "nonlinear stability experiment", 300.0, [] {
    const SpectralData& sd = tof::testing::real_alpha_spectral();
    const ExperimentConfig& ec = shared().real_alpha.experiment.run;
    const DecompositionTrace full = run_experiment(orbit(), experiment_perturbation(1.0), ec);
    const DecompositionTrace half = run_experiment(orbit(), experiment_perturbation(0.5), ec);
    const double bg = full.beta_fit / sd.gap;
    const double ratio = half.gamma_ratio / full.gamma_ratio;
    const bool size_ok = full.v0_norm > 0.8 * 6e-3 && full.v0_norm < 1.2 * 6e-3;
    const bool ok = size_ok && full.beta_r2 > 0.98 && bg >= 0.5 && bg <= 1.5 && full.gamma_rate >= 0.5 * full.beta_fit &&
                    std::abs(ratio - 1.0) < 0.3;
    std::ostringstream os;
    os << "||v0|| " << fmt("%.2e", full.v0_norm) << ", R2 " << fmt("%.5f", full.beta_r2) << ", beta "
       << fmt("%.5f", full.beta_fit) << " = " << fmt("%.3f", bg) << " x gap, phase rate "
       << fmt("%.4f", full.gamma_rate) << ", gamma_inf (" << fmt("%.3e", full.gamma_inf.theta) << ", "
       << fmt("%.3e", full.gamma_inf.tau) << "), |gamma_inf|/||v0|| " << fmt("%.4f", full.gamma_ratio)
       << " vs halved " << fmt("%.4f", half.gamma_ratio);
    return Outcome{ok, os.str()};
  });

  criterion(10, "reduced system machinery", 180.0, [&] {
    const GroupOrbit& o = orbit();
    const double m0 = (o.m_matrix({0.0, 0.0}) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(o.disc().size());
    double rf0 = 0.0;
    for (const GroupElement& z : {GroupElement{0.0, 0.0}, GroupElement{1.0, 2.5}, GroupElement{-pi / 2, -7.0}})
      rf0 = std::max(rf0, o.remainder_rf(z, zero).cwiseAbs().maxCoeff());
    const Discretization& d = o.disc();
    Eigen::VectorXd w = d.coords(tof::testing::smooth_random(d.grid, 23, 10.0, 15.0));
    w /= std::sqrt(d.inner(w, w));
    std::vector<double> q;
    for (double eps : {1e-2, 5e-3, 2.5e-3}) q.push_back(o.norm_x1(o.remainder_rf({0.0, 0.0}, eps * w)) / (eps * eps));
    const double spread = (*std::max_element(q.begin(), q.end()) - *std::min_element(q.begin(), q.end())) / q[0];
    const ExtendedState u0 = o.profile_state() + perturbation_state(d, experiment_perturbation(2.0));
    const ReducedComparison cmp = compare_reduced_direct(o, u0, 1.0, 1e-3, 0.1);
    const bool ok = m0 < 1e-8 && rf0 == 0.0 && spread < 0.1 && cmp.max_rel_error < 0.05;
    std::ostringstream os;
    os << "|M(0) - I| " << fmt("%.1e", m0) << ", max |r_f(z, 0)| " << rf0 << ", quadratic ratios " << fmt("%.5f", q[0])
       << "/" << fmt("%.5f", q[1]) << "/" << fmt("%.5f", q[2]) << ", reduced vs direct "
       << fmt("%.2e", cmp.max_rel_error);
    return Outcome{ok, os.str()};
  });

  criterion(11, "resolvent scaling on the imaginary axis", 60.0, [] {
    const Discretization& d = tof::testing::real_alpha_disc();
    const auto ray = resolvent_probe(d, {cplx(0, 10), cplx(0, 20), cplx(0, 40), cplx(0, 80)});
    double lo = 1e300, hi = 0.0;
    std::ostringstream os;
    os << "t * norm:";
    for (const ResolventSample& r : ray) {
      const double v = r.s.imag() * r.norm;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      os << " " << fmt("%.4f", v);
    }
    os << ", spread factor " << fmt("%.3f", hi / lo);
    return Outcome{hi / lo < 2.0, os.str()};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
