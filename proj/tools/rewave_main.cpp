#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "rewave/errors.hpp"
#include "rewave/generate.hpp"
#include "rewave/simulate.hpp"
#include "rewave/verify.hpp"
#include "rewave/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitClassFailed = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_dir;
};

rewave::GeneratorConfig load(const CommonArgs& args, bool config_required) {
  std::vector<std::string> overrides = args.overrides;
  if (args.seed) {
    overrides.push_back("generator.master_seed=" + std::to_string(*args.seed));
  }
  if (args.config_path.empty()) {
    if (config_required) throw rewave::ConfigError("--config is required");
    return rewave::parse_config_text(
        "[grid]\naltered = activation_threshold\n", overrides);
  }
  return rewave::load_config(args.config_path, overrides);
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
  cmd->add_option("--config", args.config_path, "configuration file");
  cmd->add_option("--set", args.overrides,
                  "override a config value (section.key=value)")
      ->take_all();
  cmd->add_option("--seed", args.seed, "override the master seed");
  cmd->add_option("--threads", args.threads, "worker thread count")
      ->envname("REWAVE_THREADS");
  if (with_out) {
    cmd->add_option("--out", args.out_dir, "output directory");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retinal wave simulator and dataset generator"};
  app.set_version_flag("--version", rewave::kToolVersion);
  app.require_subcommand(1);

  CommonArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "generate", "generate a labeled retinal-wave image dataset");
  add_common(gen, gen_args, true);

  CommonArgs sim_args;
  std::optional<std::uint32_t> sim_class;
  std::uint32_t sim_episode = 0;
  std::string sim_format = "raw";
  CLI::App* sim = app.add_subcommand(
      "simulate", "dump every frame of one wave episode as images");
  add_common(sim, sim_args, true);
  sim->add_option("--class-id", sim_class, "take parameters from this class");
  sim->add_option("--episode", sim_episode, "episode number (seeds the rng)");
  sim->add_option("--format", sim_format, "raw | cropped")
      ->check(CLI::IsMember({"raw", "cropped"}));

  std::string verify_dir;
  CLI::App* ver = app.add_subcommand("verify", "check a generated dataset");
  ver->add_option("dir", verify_dir, "dataset directory")->required();

  std::string stats_dir;
  CLI::App* sta = app.add_subcommand("stats", "summarize a generated dataset");
  sta->add_option("dir", stats_dir, "dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (gen->parsed()) {
      rewave::GeneratorConfig config = load(gen_args, true);
      rewave::RunOptions run;
      run.threads = gen_args.threads;
      run.out_dir = !gen_args.out_dir.empty() ? gen_args.out_dir
                                              : config.output_dir;
      rewave::run_generate(config, run);
      std::printf("dataset written to %s\n", run.out_dir.string().c_str());
      return kExitOk;
    }
    if (sim->parsed()) {
      rewave::GeneratorConfig config = load(sim_args, false);
      rewave::SimulateOptions opts;
      opts.out_dir = !sim_args.out_dir.empty() ? sim_args.out_dir
                                               : config.output_dir;
      opts.episode = sim_episode;
      opts.cropped = sim_format == "cropped";
      opts.class_id = sim_class;
      const int frames = rewave::run_simulate(config, opts);
      std::printf("wrote %d frames to %s\n", frames,
                  opts.out_dir.string().c_str());
      return kExitOk;
    }
    if (ver->parsed()) {
      const rewave::VerifyReport report = rewave::verify_dataset(verify_dir);
      for (const std::string& v : report.violations) {
        std::printf("FAIL %s\n", v.c_str());
      }
      std::printf("%s: %zu files checked, %zu violations\n",
                  report.ok() ? "ok" : "verification failed",
                  report.files_checked, report.violations.size());
      return report.ok() ? kExitOk : kExitVerifyFailed;
    }
    if (sta->parsed()) {
      const rewave::StatsReport stats = rewave::compute_stats(stats_dir);
      std::fputs(rewave::render_stats(stats).c_str(), stdout);
      return kExitOk;
    }
  } catch (const rewave::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadConfig;
  } catch (const rewave::ClassGenerationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitClassFailed;
  } catch (const rewave::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return sta->parsed() ? kExitBadConfig : kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitIo;
  }
  return kExitBadConfig;
}
