#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rvprd/config.hpp"
#include "rvprd/errors.hpp"
#include "rvprd/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Particle solver and verification harness for the reduced Vlasov-Poisson system with radiation damping"};
  std::string command, config_path, out_dir;
  bool override_horizon = false;
  app.add_option("command", command, "solve | picard | envelope | selftest | sweep")
      ->required()
      ->check(CLI::IsMember({"solve", "picard", "envelope", "selftest", "sweep"}));
  app.add_option("--config", config_path, "JSON configuration (omit for all defaults)");
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--override-horizon", override_horizon, "allow T >= a (the envelope no longer bounds the run)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::string text = "{}";
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw rvprd::Error("cannot read config " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    rvprd::RunConfig config = rvprd::parse_config(text);
    if (override_horizon) config.override_horizon = true;
    return rvprd::execute(config, rvprd::parse_command(command), out_dir, std::cout);
  } catch (const rvprd::HorizonError& e) {
    std::cerr << "rvprd: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "rvprd: " << e.what() << "\n";
    return 2;
  }
}
