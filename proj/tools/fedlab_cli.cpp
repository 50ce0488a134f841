// Command-line front end; everything goes through the C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "fedlab.h"

namespace {

// 0 = success, 1 = suite/run failure, 2 = config error
int exit_code_for(int status) {
  switch (status) {
    case FL_OK:
      return 0;
    case FL_ERR_CONFIG:
    case FL_ERR_INVALID:
      return 2;
    default:
      return 1;
  }
}

int finish(int status, const char* action) {
  if (status != FL_OK)
    std::fprintf(stderr, "%s failed: %s\n", action, fl_last_error());
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"federated optimization laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", phi_list, suite, algorithm;
  uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "key=value config file")
          ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "64-bit seed");
  };

  CLI::App* gen = app.add_subcommand("generate", "write a dataset");
  add_common(gen, true);

  CLI::App* run = app.add_subcommand("run", "run an algorithm");
  add_common(run, true);
  run->add_option("--phi", phi_list,
                  "comma-separated phi values for the complexity report");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required();
  add_common(verify, false);

  CLI::App* sweep = app.add_subcommand("sweep", "complexity ratio sweep");
  add_common(sweep, true);

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed())
    return finish(fl_generate(config_path.c_str(), out_dir.c_str(), seed),
                  "generate");
  if (run->parsed())
    return finish(fl_run(config_path.c_str(), out_dir.c_str(), seed,
                         phi_list.empty() ? nullptr : phi_list.c_str()),
                  "run");
  if (verify->parsed())
    return finish(fl_verify(suite.c_str(), out_dir.c_str()), "verify");
  if (sweep->parsed())
    return finish(fl_sweep(config_path.c_str(), out_dir.c_str()), "sweep");
  return 2;
}
