#include "tof/commands.hpp"

#include "tof/io.hpp"
#include "tof/operator.hpp"
#include "tof/spline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace tof {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string override_text(const CommandOptions& opt) {
  std::string s;
  if (opt.mu) s += "mu=" + format_number(*opt.mu) + "\n";
  if (opt.window) {
    const Window& w = *opt.window;
    s += "window=" + format_number(w.re_min) + "," + format_number(w.re_max) + "," + format_number(w.im_min) + "," +
         format_number(w.im_max) + "\n";
  }
  if (opt.resolution) s += "resolution=" + std::to_string(*opt.resolution) + "\n";
  return s;
}

Json params_json(const CglParams& p) {
  Json j;
  j["alpha_re"] = p.alpha.re;
  j["alpha_im"] = p.alpha.im;
  for (std::size_t k = 0; k < p.poly.size(); ++k) {
    const std::string b = "beta" + std::to_string(2 * k + 1);
    j[b + "_re"] = p.poly[k].re;
    j[b + "_im"] = p.poly[k].im;
  }
  return j;
}

struct Setup {
  RunConfig cfg;
  std::string hash;
  RestState rest;
};

Setup load(const CommandOptions& opt) {
  Setup s{load_config(opt.config_path), "", {}};
  s.hash = config_hash(s.cfg, override_text(opt));
  s.rest = rest_state(s.cfg.params);
  return s;
}

Profile profile_for(const Setup& s) { return compute_profile(s.cfg.params, s.rest, s.cfg.grid, s.cfg.pipeline); }

CsvTable field_table(const std::string& hash, const Grid1D& grid, const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  CsvTable t(hash, {"x", "v1", "v2", "dv1", "dv2"});
  for (int i = 0; i < grid.n; ++i) t.add_row({grid.x(i), v[2 * i], v[2 * i + 1], dv[2 * i], dv[2 * i + 1]});
  return t;
}

}  // namespace

Window parse_window(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(parse_decimal(item, "--window"));
  if (vals.size() != 4) throw Error(ErrorKind::config, "window", "--window needs four values re_min,re_max,im_min,im_max");
  Window w{vals[0], vals[1], vals[2], vals[3]};
  w.validate();
  return w;
}

std::vector<std::string> cmd_profile(const CommandOptions& opt, std::ostream& out) {
  const Setup s = load(opt);
  const Profile prof = profile_for(s);
  std::vector<std::string> files{join(opt.out_dir, "profile.csv"), join(opt.out_dir, "profile.json")};
  write_csv(files[0], field_table(s.hash, prof.grid, prof.v, prof.dv));
  Json j;
  j["config_hash"] = s.hash;
  j["c"] = prof.frame.c;
  j["omega"] = prof.frame.omega;
  j["v_inf_1"] = prof.frame.v_inf[0];
  j["v_inf_2"] = prof.frame.v_inf[1];
  j["mu_star"] = prof.mu_star;
  j["y_inf"] = s.rest.y_inf;
  j["newton_iterations"] = prof.newton_iterations;
  j["residual"] = prof.residual;
  j["notes"] = prof.notes;
  write_json(files[1], j);
  out << "c = " << format_number(prof.frame.c) << "\n"
      << "omega = " << format_number(prof.frame.omega) << "\n"
      << "|v_inf| = " << format_number(prof.frame.v_inf.norm()) << "\n"
      << "mu_star = " << format_number(prof.mu_star) << "\n";
  return files;
}

std::vector<std::string> cmd_spectrum(const CommandOptions& opt, std::ostream& out) {
  const Setup s = load(opt);
  const Window win = opt.window.value_or(s.cfg.window);
  win.validate();
  const int res = opt.resolution.value_or(s.cfg.resolution);
  if (res < 2) throw Error(ErrorKind::config, "resolution", "--resolution must be >= 2");
  const double mu = opt.mu.value_or(s.cfg.spectrum_mu);
  if (!(mu >= 0.0)) throw Error(ErrorKind::config, "weight", "mu must be >= 0");

  const Profile prof = profile_for(s);
  const SpectralContext ctx = make_context(s.cfg.params, prof.frame);
  const IndexMap map = map_region(ctx, mu, win, res, s.cfg.threads);

  std::vector<std::string> files{join(opt.out_dir, "index_map.csv"), join(opt.out_dir, "curves.csv"),
                                 join(opt.out_dir, "sector.json")};
  CsvTable cells(s.hash, {"re", "im", "status", "index"});
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const IndexCell& c = map.at(i, j);
      cells.add_row({map.re_at(i), map.im_at(j), std::string(c.status == CellStatus::regular ? "regular" : "on-curve"),
                     static_cast<long long>(c.index)});
    }
  }
  write_csv(files[0], cells);
  CsvTable curves(s.hash, {"side", "branch", "nu", "re", "im"});
  for (const CurvePoint& p : map.curves)
    curves.add_row({std::string(p.side == Side::plus ? "plus" : "minus"), static_cast<long long>(p.branch), p.nu,
                    p.s.real(), p.s.imag()});
  write_csv(files[1], curves);

  const Sector sec = fit_sector(ctx, mu);
  Json j;
  j["config_hash"] = s.hash;
  j["mu"] = mu;
  j["c"] = prof.frame.c;
  j["eps"] = sec.eps;
  j["beta"] = sec.beta;
  j["kappa"] = sec.kappa;
  j["min_distance"] = sec.min_distance;
  j["curve_samples"] = sec.curve_samples;
  j["notes"] = sec.notes;
  write_json(files[2], j);
  out << "cells = " << res * res << ", curve samples = " << map.curves.size() << "\n"
      << "sector eps = " << format_number(sec.eps) << ", beta = " << format_number(sec.beta) << "\n";
  return files;
}

std::vector<std::string> cmd_eig(const CommandOptions& opt, std::ostream& out) {
  const Setup s = load(opt);
  WeightSpec w = s.cfg.weight;
  if (opt.mu) w.mu = *opt.mu;
  const Profile prof = profile_for(s);
  const Discretization d = assemble(s.cfg.params, prof, w);
  const SpectralData sd = eig_near_zero(d, s.cfg.eig_count);

  std::vector<std::string> files{join(opt.out_dir, "eigenvalues.csv"), join(opt.out_dir, "kernel_1.csv"),
                                 join(opt.out_dir, "kernel_2.csv"), join(opt.out_dir, "eig.json")};
  CsvTable ev(s.hash, {"re", "im", "class"});
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k)
    ev.add_row({sd.eigenvalues[k].real(), sd.eigenvalues[k].imag(), std::string(class_name(sd.classes[k]))});
  write_csv(files[0], ev);
  for (int k = 0; k < 2; ++k) {
    const ExtendedState st = d.state(k == 0 ? sd.phi1 : sd.phi2);
    write_csv(files[1 + k], field_table(s.hash, d.grid, st.v, differentiate_field(d.grid, st.v)));
  }
  Json j;
  j["config_hash"] = s.hash;
  j["mu"] = w.mu;
  j["kernel_count"] = sd.kernel_count;
  j["kernel_tol"] = sd.kernel_tol;
  j["kernel_angle"] = sd.kernel_angle;
  j["point_gap"] = sd.point_gap;
  j["essential_gap"] = sd.essential_gap;
  j["gap"] = sd.gap;
  j["biorth_error"] = sd.biorth_error;
  j["iterations"] = sd.iterations;
  j["max_residual"] = sd.max_residual;
  j["stagnated"] = sd.stagnated;
  write_json(files[3], j);
  out << "kernel eigenvalues = " << sd.kernel_count << ", gap = " << format_number(sd.gap) << "\n";
  return files;
}

std::vector<std::string> cmd_simulate(const CommandOptions& opt, std::ostream& out) {
  const Setup s = load(opt);
  s.cfg.require_section("time");
  SimConfig sc;
  sc.grid = s.cfg.grid;
  sc.dt = s.cfg.dt;
  sc.t_end = s.cfg.t_end;
  sc.weight = s.cfg.weight;
  sc.snapshot_stride = s.cfg.snapshot_stride;
  if (s.cfg.frame == FrameKind::comoving) {
    const Profile prof = profile_for(s);
    sc.frame = SimFrame{FrameKind::comoving, prof.frame.c, prof.frame.omega};
  } else {
    sc.frame = SimFrame{FrameKind::lab, 0.0, 0.0};
  }
  const ExtendedState init = sigmoid_state(sc.grid, sc.weight, s.cfg.init_amplitude, s.cfg.init_x0);
  const TimeSeries ts = simulate(s.cfg.params, sc, init);

  std::vector<std::string> files;
  Json snaps = Json::array(), rho = Json::array();
  for (std::size_t k = 0; k < ts.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
    const ExtendedState& st = ts.snapshots[k];
    CsvTable t(s.hash, {"x", "v1", "v2"});
    for (int i = 0; i < sc.grid.n; ++i) {
      const Vec2 u = st.at(i) - sc.weight.vhat(sc.grid.x(i)) * st.rho;
      t.add_row({sc.grid.x(i), u[0], u[1]});
    }
    files.push_back(join(opt.out_dir, name));
    write_csv(files.back(), t);
    snaps.push_back(name);
    rho.push_back(Json::array({st.rho[0], st.rho[1]}));
  }

  Json j;
  j["config_hash"] = s.hash;
  j["params"] = params_json(s.cfg.params);
  Json c;
  c["x_min"] = sc.grid.x_min;
  c["x_max"] = sc.grid.x_max;
  c["n"] = sc.grid.n;
  c["dt"] = sc.dt;
  c["t_end"] = sc.t_end;
  c["snapshot_stride"] = sc.snapshot_stride;
  c["frame"] = sc.frame.kind == FrameKind::lab ? "lab" : "comoving";
  c["frame_c"] = sc.frame.c;
  c["frame_omega"] = sc.frame.omega;
  c["mu"] = sc.weight.mu;
  c["mu_hat"] = sc.weight.mu_hat;
  c["init_amplitude"] = s.cfg.init_amplitude;
  c["init_x0"] = s.cfg.init_x0;
  j["config"] = c;
  j["steps"] = ts.steps;
  j["level"] = ts.level;
  j["times"] = ts.times;
  Json fp = Json::array();
  for (double x : ts.front_pos) fp.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
  j["front_pos"] = fp;
  j["phase"] = ts.phase;
  j["norm_x1"] = ts.norm_x1;
  j["rho"] = rho;
  j["snapshots"] = snaps;
  const RateSummary rs = observables(ts);
  Json r;
  r["has_front"] = rs.has_front;
  r["c_est"] = rs.has_front ? Json(rs.c_est) : Json(nullptr);
  r["c_drift"] = rs.has_front ? Json(rs.c_drift) : Json(nullptr);
  r["c_fit_residual"] = rs.has_front ? Json(rs.c_fit_residual) : Json(nullptr);
  r["omega_est"] = rs.omega_est;
  r["omega_drift"] = rs.omega_drift;
  j["rates"] = r;
  files.push_back(join(opt.out_dir, "manifest.json"));
  write_json(files.back(), j);
  out << "steps = " << ts.steps << ", snapshots = " << ts.snapshots.size() << "\n";
  if (rs.has_front) out << "c_est = " << format_number(rs.c_est) << ", c_drift = " << format_number(rs.c_drift) << "\n";
  out << "omega_est = " << format_number(rs.omega_est) << "\n";
  return files;
}

std::vector<std::string> cmd_stability(const CommandOptions& opt, std::ostream& out) {
  const Setup s = load(opt);
  WeightSpec w = s.cfg.weight;
  if (opt.mu) w.mu = *opt.mu;
  const ExperimentSpec& e = s.cfg.experiment;
  const Profile prof = profile_for(s);
  const Discretization d = assemble(s.cfg.params, prof, w);
  const SpectralData sd = eig_near_zero(d, s.cfg.eig_count);
  const GroupOrbit orbit(d, sd);
  const Perturbation pert = bump_perturbation(d, e.bump_center, e.bump_width, e.bump_dir, e.bump_norm, e.rho0);
  const DecompositionTrace tr = run_experiment(orbit, pert, e.run);

  std::vector<std::string> files{join(opt.out_dir, "trace.csv"), join(opt.out_dir, "stability.json")};
  CsvTable t(s.hash, {"t", "theta", "tau", "w_norm", "res1", "res2"});
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    t.add_row({tr.times[k], tr.z[k].theta, tr.z[k].tau, tr.w_norm[k], tr.orth[k][0], tr.orth[k][1]});
  write_csv(files[0], t);
  Json j;
  j["config_hash"] = s.hash;
  j["mu"] = w.mu;
  j["v0_norm"] = tr.v0_norm;
  j["gap"] = sd.gap;
  j["beta_fit"] = tr.beta_fit;
  j["beta_r2"] = tr.beta_r2;
  j["beta_over_gap"] = tr.beta_fit / sd.gap;
  j["K_fit"] = tr.K_fit;
  j["t_fit_start"] = tr.t_fit_start;
  j["t_fit_end"] = tr.t_fit_end;
  j["gamma_inf"] = Json{{"theta", tr.gamma_inf.theta}, {"tau", tr.gamma_inf.tau}};
  j["gamma_ratio"] = tr.gamma_ratio;
  j["gamma_rate"] = tr.gamma_rate;
  j["max_newton_iterations"] = tr.max_newton;
  write_json(files[1], j);
  out << "beta_fit = " << format_number(tr.beta_fit) << " (gap " << format_number(sd.gap) << ", R^2 "
      << format_number(tr.beta_r2) << ")\n"
      << "gamma_inf = (" << format_number(tr.gamma_inf.theta) << ", " << format_number(tr.gamma_inf.tau) << ")\n";
  return files;
}

}  // namespace tof
