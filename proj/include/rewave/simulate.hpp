#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "rewave/config.hpp"

namespace rewave {

struct SimulateOptions {
  std::filesystem::path out_dir;
  std::uint32_t episode = 0;
  bool cropped = false;  // default: raw full-retina frames
  std::optional<std::uint32_t> class_id;  // params from the grid; else base
};

// Writes every frame of one episode, unaugmented, as
// ep<episode>_t<step>.png (step zero-padded to 5 digits).  The episode seed
// is mix(class_seed, episode) when a class is chosen, else
// mix(master_seed, episode).  Returns the number of frames written.
int run_simulate(const GeneratorConfig& config, const SimulateOptions& options);

}  // namespace rewave
