// compactkit command-line front end.

#include <iostream>

#include <CLI11.hpp>

#include "compactkit/cli.hpp"

int main(int argc, char** argv) {
  compactkit::RunConfig cfg;
  CLI::App app{"Certify total boundedness of sampled function families in L^p"};
  app.set_version_flag("--version", compactkit::kToolVersion);

  app.add_option("command", cfg.command, "moduli | cover | certify | fourier | helly | sobolev")
      ->required()
      ->check(CLI::IsMember(compactkit::commands()));
  app.add_option("--family", cfg.family_path, "family manifest (JSON)")->required();
  app.add_option("--p", cfg.p, "exponent p >= 1")->default_val(2.0);
  app.add_option("--q", cfg.q, "target exponent for 'sobolev' (defaults to p)");
  app.add_option("--epsilon", cfg.epsilon, "certification tolerance");
  app.add_option("--tau", cfg.tau, "pointwise tolerance for 'helly'");
  app.add_option("--r-grid", cfg.r_grid, "tail radii, comma separated")->delimiter(',');
  app.add_option("--rho-grid", cfg.rho_grid, "translation radii (frequencies for 'fourier'), comma separated")
      ->delimiter(',');
  app.add_option("--embedding-constant", cfg.embedding_constant, "Sobolev constant C for the diagnostic")
      ->default_val(1.0);
  app.add_option("--output", cfg.output_path, "report path (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return compactkit::exit_error;
  }

  const auto outcome = compactkit::run(cfg);
  const auto& rep = outcome.report;
  std::cerr << "compactkit " << cfg.command << ": " << rep.at("status").get<std::string>();
  if (rep.contains("error")) std::cerr << " (" << rep["error"]["message"].get<std::string>() << ")";
  std::cerr << '\n';
  return outcome.exit_code;
}
