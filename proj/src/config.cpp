#include "tof/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tof {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"grid", {"x_min", "x_max", "n"}},
      {"time", {"dt", "t_end", "snapshot_stride", "frame"}},
      {"init", {"amplitude", "x0"}},
      {"weight", {"mu", "mu_hat"}},
      {"profile", {"dt", "t_probe", "t_settle"}},
      {"spectrum", {"mu", "re_min", "re_max", "im_min", "im_max", "resolution", "threads"}},
      {"eig", {"count"}},
      {"experiment",
       {"bump_center", "bump_width", "bump_dir_1", "bump_dir_2", "bump_norm", "rho0_1", "rho0_2", "eps0", "dt",
        "t_end", "decompose_every"}},
  };
  return keys;
}

bool model_key(const std::string& k, int* index) {
  if (k == "alpha_re" || k == "alpha_im") {
    *index = -1;
    return true;
  }
  if (k.size() < 8 || k.rfind("beta", 0) != 0) return false;
  const std::string suffix = k.substr(k.size() - 3);
  if (suffix != "_re" && suffix != "_im") return false;
  const std::string digits = k.substr(4, k.size() - 7);
  int m = 0;
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
  if (ec != std::errc() || p != digits.data() + digits.size() || m < 1 || m % 2 == 0) return false;
  *index = (m - 1) / 2;
  return true;
}

int parse_count(const std::string& text, const std::string& what) {
  const double v = parse_decimal(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw Error(ErrorKind::config, "bad-value", what + " must be an integer, got '" + text + "'");
  return static_cast<int>(v);
}

}  // namespace

double parse_decimal(const std::string& text, const std::string& what) {
  std::size_t a = 0, b = text.size();
  while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
  const char* first = text.data() + a;
  const char* last = text.data() + b;
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(first, last, v, std::chars_format::general);
  if (first == last || ec != std::errc() || p != last || !std::isfinite(v))
    throw Error(ErrorKind::config, "bad-value", what + " must be a decimal literal, got '" + text + "'");
  return v;
}

void RunConfig::require_section(const std::string& s) const {
  if (!has_section(s)) throw Error(ErrorKind::config, "missing-section", "config needs a [" + s + "] section");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::config, "syntax", e.what());
  }

  RunConfig cfg;
  std::map<int, Complex2> poly;
  bool have_alpha_re = false, have_alpha_im = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorKind::config, "syntax", "key '" + section + "' outside of a section");
    cfg.sections.insert(section);
    for (const auto& [key, node] : body) {
      const std::string value = node.data();
      const std::string full = section + "." + key;
      cfg.entries[full] = value;
      if (section == "model") {
        int idx = 0;
        if (!model_key(key, &idx)) throw Error(ErrorKind::config, "unknown-key", "unknown key " + full);
        const double v = parse_decimal(value, full);
        const bool re = key.ends_with("_re");
        if (idx < 0) {
          (re ? cfg.params.alpha.re : cfg.params.alpha.im) = v;
          (re ? have_alpha_re : have_alpha_im) = true;
        } else {
          (re ? poly[idx].re : poly[idx].im) = v;
        }
        continue;
      }
      const auto it = known_keys().find(section);
      if (it == known_keys().end()) throw Error(ErrorKind::config, "unknown-section", "unknown section [" + section + "]");
      if (!it->second.count(key)) throw Error(ErrorKind::config, "unknown-key", "unknown key " + full);
      if (full == "time.frame") {
        if (value == "lab") cfg.frame = FrameKind::lab;
        else if (value == "comoving") cfg.frame = FrameKind::comoving;
        else throw Error(ErrorKind::config, "bad-value", "time.frame must be lab or comoving");
        continue;
      }
      const double v = parse_decimal(value, full);
      if (section == "grid") {
        if (key == "x_min") cfg.grid.x_min = v;
        else if (key == "x_max") cfg.grid.x_max = v;
        else cfg.grid.n = parse_count(value, full);
      } else if (section == "time") {
        if (key == "dt") cfg.dt = v;
        else if (key == "t_end") cfg.t_end = v;
        else cfg.snapshot_stride = parse_count(value, full);
      } else if (section == "init") {
        (key == "amplitude" ? cfg.init_amplitude : cfg.init_x0) = v;
      } else if (section == "weight") {
        (key == "mu" ? cfg.weight.mu : cfg.weight.mu_hat) = v;
      } else if (section == "profile") {
        if (key == "dt") cfg.pipeline.dt = v;
        else if (key == "t_probe") cfg.pipeline.t_probe = v;
        else cfg.pipeline.t_settle = v;
      } else if (section == "spectrum") {
        if (key == "mu") cfg.spectrum_mu = v;
        else if (key == "re_min") cfg.window.re_min = v;
        else if (key == "re_max") cfg.window.re_max = v;
        else if (key == "im_min") cfg.window.im_min = v;
        else if (key == "im_max") cfg.window.im_max = v;
        else if (key == "resolution") cfg.resolution = parse_count(value, full);
        else cfg.threads = parse_count(value, full);
      } else if (section == "eig") {
        cfg.eig_count = parse_count(value, full);
      } else if (section == "experiment") {
        ExperimentSpec& e = cfg.experiment;
        if (key == "bump_center") e.bump_center = v;
        else if (key == "bump_width") e.bump_width = v;
        else if (key == "bump_dir_1") e.bump_dir[0] = v;
        else if (key == "bump_dir_2") e.bump_dir[1] = v;
        else if (key == "bump_norm") e.bump_norm = v;
        else if (key == "rho0_1") e.rho0[0] = v;
        else if (key == "rho0_2") e.rho0[1] = v;
        else if (key == "eps0") e.run.eps0 = v;
        else if (key == "dt") e.run.dt = v;
        else if (key == "t_end") e.run.t_end = v;
        else e.run.decompose_every = v;
      }
    }
  }

  if (!cfg.has_section("model")) throw Error(ErrorKind::config, "missing-section", "config needs a [model] section");
  if (!have_alpha_re) throw Error(ErrorKind::config, "missing-key", "missing key model.alpha_re");
  if (!have_alpha_im) throw Error(ErrorKind::config, "missing-key", "missing key model.alpha_im");
  if (!poly.count(0)) throw Error(ErrorKind::config, "missing-key", "missing key model.beta1_re");
  if (!(cfg.params.alpha.re > 0.0)) throw Error(ErrorKind::config, "bad-value", "model.alpha_re must be positive");
  const int deg = poly.rbegin()->first;
  cfg.params.poly.assign(static_cast<std::size_t>(deg) + 1, Complex2{});
  for (const auto& [k, c] : poly) cfg.params.poly[static_cast<std::size_t>(k)] = c;

  cfg.grid = Grid1D::make(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n);
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw Error(ErrorKind::config, "bad-value", "time.dt and time.t_end must be positive");
  if (cfg.snapshot_stride < 1) throw Error(ErrorKind::config, "bad-value", "time.snapshot_stride must be >= 1");
  if (cfg.resolution < 2) throw Error(ErrorKind::config, "bad-value", "spectrum.resolution must be >= 2");
  if (cfg.threads < 0) throw Error(ErrorKind::config, "bad-value", "spectrum.threads must be >= 0");
  if (cfg.eig_count < 2) throw Error(ErrorKind::config, "bad-value", "eig.count must be >= 2");
  cfg.window.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "unreadable", "cannot read config file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg, const std::string& extra) {
  std::string canon;
  for (const auto& [k, v] : cfg.entries) canon += k + "=" + v + "\n";
  canon += extra;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
  return buf;
}

}  // namespace tof
