#pragma once

#include "tof/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tof {

struct CommandOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<double> mu;
  std::optional<Window> window;
  std::optional<int> resolution;
};

// Each command writes its artifacts into out_dir, prints a short summary and returns
// the list of written files. Module errors propagate as tof::Error.
std::vector<std::string> cmd_profile(const CommandOptions& opt, std::ostream& out);
// index_map.csv (re, im, status, index), curves.csv (side, branch, nu, re, im), sector.json
std::vector<std::string> cmd_spectrum(const CommandOptions& opt, std::ostream& out);
// eigenvalues.csv (re, im, class), kernel_1.csv, kernel_2.csv, eig.json
std::vector<std::string> cmd_eig(const CommandOptions& opt, std::ostream& out);
// snapshot_NNNN.csv (x, v1, v2 holding v - rho vhat) and manifest.json
std::vector<std::string> cmd_simulate(const CommandOptions& opt, std::ostream& out);
// trace.csv (t, theta, tau, w_norm, res1, res2) and stability.json
std::vector<std::string> cmd_stability(const CommandOptions& opt, std::ostream& out);

// "a,b,c,d" -> Window{re_min = a, re_max = b, im_min = c, im_max = d}
Window parse_window(const std::string& text);

}  // namespace tof
