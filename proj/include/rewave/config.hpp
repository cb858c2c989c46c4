#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rewave/datasetgen.hpp"

namespace rewave {

// Everything that defines a dataset, plus runtime-only knobs (worker count,
// output directory) that deliberately stay out of the config echo so that
// reruns with different thread counts produce byte-identical trees.
struct GeneratorConfig {
  std::uint64_t master_seed = 42;
  double retina_radius = 160.0;
  int image_side = 256;
  int images_per_class = 1000;
  ParameterGrid grid;
  SelectionPolicy policy;
  GlobalDynamicsConfig dynamics;
  SplitRatios ratios;

  // runtime-only
  int workers = 0;  // 0 = hardware concurrency
  std::string output_dir;

  void validate() const;  // throws ConfigError

  // Compact axis summary for the manifest metadata.
  std::string grid_description() const;
};

// Parses the sectioned key=value format, applies `--set section.key=value`
// overrides, validates.  Throws ConfigError naming the offending key.
GeneratorConfig parse_config_text(std::string_view text,
                                  const std::vector<std::string>& overrides);

GeneratorConfig load_config(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides);

// Effective dataset-defining configuration, canonical key order, full
// precision.  Grid axes render as explicit value lists.  Parsing the echo
// reproduces the dataset exactly.
std::string render_config_echo(const GeneratorConfig& config);

}  // namespace rewave
