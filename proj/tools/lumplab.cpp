#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "lumplab/experiments.hpp"
#include "lumplab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config) {
  auto* copt = cmd->add_option("--config", args.config, "experiment config (JSON)")
                   ->envname("LUMPLAB_CONFIG");
  if (need_config) copt->required();
  cmd->add_option("--out", args.out, "output directory")->envname("LUMPLAB_OUT");
  cmd->add_option("--seed", args.seed, "64-bit seed override")
      ->envname("LUMPLAB_SEED")
      ->trigger_on_parse();
  cmd->add_option("--threads", args.threads, "worker threads (runs are deterministic)")
      ->envname("LUMPLAB_THREADS");
}

int run_subcommand(const std::string& name, const CommonArgs& args, bool seed_given) {
  using namespace lumplab;
  ExperimentConfig cfg = ExperimentConfig::from_file(args.config);
  if (seed_given) cfg.seed = args.seed;
  std::filesystem::create_directories(args.out);
  run_experiment(cfg, name, args.out);
  std::cout << name << ": wrote outputs to " << args.out << " (config_hash=" << cfg.config_hash
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mass-lumping and Kronecker preconditioner experiment runner"};
  app.require_subcommand(1);

  const std::vector<std::string> experiment_cmds = {"assemble", "spectrum", "lump",
                                                    "converge", "integrate", "nkp"};
  std::map<std::string, CommonArgs> args;
  for (const auto& name : experiment_cmds) {
    auto* cmd = app.add_subcommand(name, name + " experiment");
    add_common(cmd, args[name], true);
  }
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  CommonArgs verify_args;
  verify_cmd->add_option("--seed", verify_args.seed, "64-bit seed for generated test pencils")
      ->envname("LUMPLAB_SEED");
  verify_cmd->add_option("--threads", verify_args.threads, "worker threads")
      ->envname("LUMPLAB_THREADS");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (verify_cmd->parsed()) {
      auto results = lumplab::verify::run_all(verify_args.seed);
      return lumplab::verify::report(results, std::cout) ? kExitOk : kExitCheckFailure;
    }
    for (const auto& name : experiment_cmds) {
      auto* cmd = app.get_subcommand(name);
      if (cmd->parsed())
        return run_subcommand(name, args[name], cmd->count("--seed") > 0);
    }
    std::cerr << "no subcommand selected\n";
    return kExitConfigError;
  } catch (const lumplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  }
}
