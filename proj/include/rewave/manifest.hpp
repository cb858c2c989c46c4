#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rewave/datasetgen.hpp"

namespace rewave {

struct ManifestMetadata {
  std::uint64_t master_seed = 0;
  int image_side = 0;
  std::string grid_desc;
  std::string tool_version;
};

struct DatasetManifest {
  ManifestMetadata meta;
  std::vector<ManifestRow> rows;
};

// Orders rows by (class_id, image index) and checks path uniqueness and
// per-class split balance.  Throws std::runtime_error on violations.
DatasetManifest build_manifest(std::vector<ManifestRow> rows,
                               ManifestMetadata meta);

// CSV with `#key=value` metadata lines above the header row; UTF-8, LF.
std::string render_manifest_csv(const DatasetManifest& manifest);
DatasetManifest parse_manifest_csv(std::string_view text);

}  // namespace rewave
