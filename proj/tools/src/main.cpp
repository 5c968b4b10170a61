#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace radiso::cli;
  Options opt;
  CLI::App app{"Radial transport maps, Gaussian isoperimetric bounds and Poincare limits"};
  app.set_config("--config", "", "File of key=value lines setting any long option");
  app.allow_config_extras(false);
  // Density specs contain commas; lists such as N=100,1000 are split by the option itself.
  app.get_config_formatter_base()->arrayDelimiter(';');
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--density", opt.density, "Density spec")->capture_default_str();
  app.add_option("--n", opt.n, "Dimension")->capture_default_str();
  app.add_option("--out", opt.out, "Output CSV path");
  app.add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", opt.tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--grid", opt.grid, "Transport nodes (profile: a-grid size)");
  app.add_option("--cdf-floor", opt.cdf_floor, "Smallest tail mass on the transport grid")
      ->capture_default_str();
  app.add_option("--N", opt.N, "Sphere dimensions for verify")->delimiter(',')->capture_default_str();
  app.add_option("--count", opt.count, "Samples for verify")->capture_default_str();
  app.add_option("--samples-out", opt.samples_out, "Sample CSV path for verify");
  app.add_option("--phi", opt.phi, "phi spec for classify")->capture_default_str();
  app.add_option("--p", opt.p, "Exponent p for classify")->capture_default_str();
  app.add_option("--trials", opt.trials, "Random sets for audit")->capture_default_str();

  auto* transport = app.add_subcommand("transport", "Build the transport map and report L");
  auto* profile = app.add_subcommand("profile", "Emit the isoperimetric lower-bound curve");
  auto* verify = app.add_subcommand("verify", "Poincare-limit convergence and sampling checks");
  auto* classify = app.add_subcommand("classify", "Classify phi-exponential densities");
  auto* audit = app.add_subcommand("audit", "Audit the 1-D bound on random interval unions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::kInvalidArgs;
  }

  if (transport->parsed()) return cmd_transport(opt, std::cout, std::cerr);
  if (profile->parsed()) return cmd_profile(opt, std::cout, std::cerr);
  if (verify->parsed()) return cmd_verify(opt, std::cout, std::cerr);
  if (classify->parsed()) return cmd_classify(opt, std::cout, std::cerr);
  if (audit->parsed()) return cmd_audit(opt, std::cout, std::cerr);
  return exit_code::kInvalidArgs;
}
