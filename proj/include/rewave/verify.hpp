#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rewave/config.hpp"
#include "rewave/manifest.hpp"

namespace rewave {

struct VerifyReport {
  std::vector<std::string> violations;
  std::size_t files_checked = 0;
  bool ok() const { return violations.empty(); }
};

// Cross-checks a generated dataset directory: manifest <-> filesystem
// agreement, binary pixel values, split balance, quota exactness, spacing
// multiples, parameter-file round trips against the echoed config.
// Never throws for dataset defects; those land in the report.
VerifyReport verify_dataset(const std::filesystem::path& dir);

struct ClassStats {
  std::uint32_t class_id = 0;
  std::size_t train = 0, val = 0, test = 0;
  double active_mean = 0.0;
  std::size_t active_min = 0, active_max = 0;
  int spacing_used = 0, threshold_used = 0;
  std::size_t reused_frames = 0;  // rows sharing (episode, step) with another
};

struct StatsReport {
  std::size_t classes = 0, images = 0;
  std::size_t train = 0, val = 0, test = 0;
  double active_mean = 0.0;
  std::size_t active_min = 0, active_max = 0;
  std::size_t classes_spacing_adjusted = 0;
  std::size_t classes_threshold_adjusted = 0;
  std::size_t classes_with_reuse = 0;
  std::vector<ClassStats> per_class;
};

// Summarizes a dataset.  Throws IoError when the manifest is missing.
StatsReport compute_stats(const std::filesystem::path& dir);

std::string render_stats(const StatsReport& stats);

}  // namespace rewave
