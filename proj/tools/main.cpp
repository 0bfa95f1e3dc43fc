#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace edgebrane::cli;
  CLI::App app{"Geometry checks and massive-end string evolution"};
  app.require_subcommand(1);
  int seed = 0;  // reserved; nothing is stochastic

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Evaluate catalog expectations and write verify.csv");
  v->add_option("--entries", verify.entries, "Catalog ids, e.g. helicoid:omega=0.5,R=1");
  v->add_option("--tolerance", verify.tolerance, "Absolute tolerance replacing the catalog's");
  v->add_option("--out-dir", verify.out_dir, "Output directory");
  v->add_flag("--force", verify.force, "Overwrite an existing run");
  v->add_option("--seed", seed, "Reserved");

  EvolveOptions evolve;
  auto* e = app.add_subcommand("evolve", "Evolve a string with massive ends");
  e->add_option("--config", evolve.config, "JSON simulation config")->required();
  e->add_option("--out-dir", evolve.out_dir, "Output directory");
  e->add_flag("--force", evolve.force, "Overwrite an existing run");
  e->add_option("--seed", seed, "Reserved");

  ScanOptions scan;
  auto* s = app.add_subcommand("scan", "Parameter scan (hole edge residual or orbit relation)");
  s->add_option("--config", scan.spec, "JSON scan spec")->required();
  s->add_option("--out-dir", scan.out_dir, "Output directory");
  s->add_flag("--force", scan.force, "Overwrite an existing run");
  s->add_option("--threads", scan.threads, "Worker threads");
  s->add_option("--seed", seed, "Reserved");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*v) return cmd_verify(verify, std::cerr);
    if (*e) return cmd_evolve(evolve, std::cerr);
    return cmd_scan(scan, std::cerr);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kFailure;
  }
}
