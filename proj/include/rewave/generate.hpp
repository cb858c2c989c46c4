#pragma once

#include <filesystem>

#include "rewave/config.hpp"

namespace rewave {

struct RunOptions {
  int threads = 0;  // 0 = config.workers, then hardware concurrency
  std::filesystem::path out_dir;
};

// End-to-end dataset generation.  Classes are independent work units run on
// a worker pool; every emitted byte is a pure function of (config,
// master_seed), so thread count and scheduling never change the output.
// Layout written under out_dir:
//   config_echo.cfg
//   manifest.csv
//   params/class_XXXXX.txt
//   {train,val,test}/class_XXXXX/img_XXXXXX.png
// Throws ConfigError (bad config / non-empty out dir), ClassGenerationError,
// IoError.
void run_generate(const GeneratorConfig& config, const RunOptions& options);

}  // namespace rewave
