#include "tof/commands.hpp"
#include "tof/io.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int report(const std::string& kind, const std::string& code, const std::string& message, int status) {
  tof::Json j;
  j["error"] = kind;
  j["code"] = code;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toflab: traveling oscillating fronts in the complex Ginzburg-Landau equation"};
  app.require_subcommand(1);

  tof::CommandOptions opt;
  std::string window;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
  };
  CLI::App* profile = app.add_subcommand("profile", "compute the front profile");
  CLI::App* spectrum = app.add_subcommand("spectrum", "Fredholm index map, dispersion curves and sector");
  CLI::App* eig = app.add_subcommand("eig", "eigenvalues near zero of the discretized linearization");
  CLI::App* simulate = app.add_subcommand("simulate", "time integration from sigmoidal data");
  CLI::App* stability = app.add_subcommand("stability", "nonlinear stability experiment");
  for (CLI::App* sub : {profile, spectrum, eig, simulate, stability}) add_common(sub);
  for (CLI::App* sub : {spectrum, eig, stability}) sub->add_option("--mu", opt.mu, "weight exponent");
  spectrum->add_option("--window", window, "re_min,re_max,im_min,im_max");
  spectrum->add_option("--resolution", opt.resolution, "cells per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", "usage", e.what(), 2);
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!window.empty()) opt.window = tof::parse_window(window);
    if (sub == profile) tof::cmd_profile(opt, std::cout);
    else if (sub == spectrum) tof::cmd_spectrum(opt, std::cout);
    else if (sub == eig) tof::cmd_eig(opt, std::cout);
    else if (sub == simulate) tof::cmd_simulate(opt, std::cout);
    else tof::cmd_stability(opt, std::cout);
  } catch (const tof::Error& e) {
    return report(tof::kind_name(e.kind()), e.code(), e.what(), tof::exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report("numerical", "internal", e.what(), 3);
  }
  return 0;
}
