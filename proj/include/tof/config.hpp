#pragma once

#include "tof/cgl_model.hpp"
#include "tof/common.hpp"
#include "tof/evolve.hpp"
#include "tof/profile.hpp"
#include "tof/spectrum.hpp"
#include "tof/stability.hpp"
#include "tof/weight.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace tof {

// Sections and keys (all values are decimal literals unless noted):
//   [model]      alpha_re, alpha_im, beta1_re, beta1_im, beta3_re, beta3_im, ...
//   [grid]       x_min, x_max, n
//   [time]       dt, t_end, snapshot_stride, frame (lab | comoving)
//   [init]       amplitude, x0
//   [weight]     mu, mu_hat
//   [profile]    dt, t_probe, t_settle
//   [spectrum]   mu, re_min, re_max, im_min, im_max, resolution, threads
//   [eig]        count
//   [experiment] bump_center, bump_width, bump_dir_1, bump_dir_2, bump_norm, rho0_1, rho0_2,
//                eps0, dt, t_end, decompose_every
struct ExperimentSpec {
  double bump_center = -10.0;
  double bump_width = 5.0;
  Vec2 bump_dir{1.0, 0.5};
  double bump_norm = 5e-3;
  Vec2 rho0{1e-3, 1e-3};
  ExperimentConfig run;
};

struct RunConfig {
  CglParams params;
  Grid1D grid;
  double dt = 0.01;
  double t_end = 100.0;
  int snapshot_stride = 1000;
  FrameKind frame = FrameKind::lab;
  double init_amplitude = 0.9;
  double init_x0 = 0.0;
  WeightSpec weight;
  PipelineOptions pipeline;
  double spectrum_mu = 0.0;
  Window window;
  int resolution = 200;
  int threads = 0;
  int eig_count = 8;
  ExperimentSpec experiment;

  std::set<std::string> sections;
  // section.key -> literal as written
  std::map<std::string, std::string> entries;

  bool has_section(const std::string& s) const { return sections.count(s) != 0; }
  // Error(config, "missing-section") when absent.
  void require_section(const std::string& s) const;
};

// Throws Error(config, ...) on syntax errors, unknown keys, non-decimal values,
// missing model keys or out-of-range values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// 64-bit FNV-1a over the sorted entries followed by the extra text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg, const std::string& extra = "");
std::uint64_t fnv1a(const std::string& bytes);

// Strict decimal literal (optional sign, digits, point, exponent); nothing else.
double parse_decimal(const std::string& text, const std::string& what);

}  // namespace tof
