#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "qtraj/acceptance.hpp"
#include "qtraj/config.hpp"
#include "qtraj/execute.hpp"
#include "qtraj/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to the JSON run config")->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "seed override")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--threads", args.threads, "OpenMP thread count (0 = runtime default)");
}

int run_mode(const CommonArgs& args, std::initializer_list<qtraj::Mode> allowed) {
  std::ifstream f(args.config_path);
  if (!f) {
    std::cerr << "config error: cannot open " << args.config_path << "\n";
    return qtraj::kExitConfigError;
  }
  std::stringstream buf;
  buf << f.rdbuf();

  qtraj::RunConfig cfg;
  try {
    cfg = qtraj::parse_config(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return qtraj::kExitConfigError;
  }
  bool mode_ok = false;
  for (auto m : allowed) mode_ok = mode_ok || cfg.mode == m;
  if (!mode_ok) {
    std::cerr << "config error: mode '" << qtraj::mode_name(cfg.mode)
              << "' does not match this subcommand\n";
    return qtraj::kExitConfigError;
  }
  if (args.seed_given) cfg.seed = args.seed;
  if (!args.out_dir.empty()) cfg.output = args.out_dir;
  return qtraj::execute(cfg, std::cout, args.threads);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtraj — quantum-trajectory and filtering simulator for a damped oscillator"};
  app.set_version_flag("--version", qtraj::kVersion);
  app.require_subcommand(1);

  CommonArgs run_args, ens_args, cmp_args, sur_args, lin_args;
  auto* cmd_run = app.add_subcommand("run", "single trajectory (diffusive, counting or analytic)");
  add_common(cmd_run, run_args);
  auto* cmd_ens = app.add_subcommand("ensemble", "trajectory ensemble with averaged statistics");
  add_common(cmd_ens, ens_args);
  auto* cmd_cmp = app.add_subcommand("compare", "numerical vs closed-form run on one noise path");
  add_common(cmd_cmp, cmp_args);
  auto* cmd_sur = app.add_subcommand("survival", "zero-count frequencies vs closed form");
  add_common(cmd_sur, sur_args);
  auto* cmd_lin = app.add_subcommand("lindblad", "master-equation integration");
  add_common(cmd_lin, lin_args);
  auto* cmd_self = app.add_subcommand("selftest", "run the full acceptance suite");
  int self_threads = 0;
  cmd_self->add_option("--threads", self_threads, "OpenMP thread count (0 = runtime default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qtraj::kExitConfigError;
  }

  using qtraj::Mode;
  if (cmd_run->parsed())
    return run_mode(run_args, {Mode::Diffusive, Mode::Counting, Mode::Analytic});
  if (cmd_ens->parsed()) return run_mode(ens_args, {Mode::Ensemble});
  if (cmd_cmp->parsed()) return run_mode(cmp_args, {Mode::Compare});
  if (cmd_sur->parsed()) return run_mode(sur_args, {Mode::Survival});
  if (cmd_lin->parsed()) return run_mode(lin_args, {Mode::Lindblad});
  if (cmd_self->parsed()) {
    if (self_threads > 0) omp_set_num_threads(self_threads);
    const int failures = qtraj::run_acceptance_suite(std::cout);
    return failures == 0 ? qtraj::kExitOk : qtraj::kExitToleranceExceeded;
  }
  return qtraj::kExitConfigError;
}
