#include "rewave/verify.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rewave/errors.hpp"
#include "rewave/imageio.hpp"

namespace rewave {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

VerifyReport verify_dataset(const fs::path& dir) {
  VerifyReport report;
  const auto flag = [&](const std::string& what) {
    report.violations.push_back(what);
  };

  if (!fs::exists(dir / "manifest.csv")) {
    flag("missing manifest: " + (dir / "manifest.csv").string());
    return report;
  }
  if (!fs::exists(dir / "config_echo.cfg")) {
    flag("missing config echo: " + (dir / "config_echo.cfg").string());
    return report;
  }

  DatasetManifest manifest;
  GeneratorConfig config;
  try {
    manifest = parse_manifest_csv(slurp(dir / "manifest.csv"));
  } catch (const std::exception& e) {
    flag(std::string("unreadable manifest: ") + e.what());
    return report;
  }
  try {
    config = load_config(dir / "config_echo.cfg", {});
  } catch (const std::exception& e) {
    flag(std::string("unreadable config echo: ") + e.what());
    return report;
  }

  if (manifest.meta.master_seed != config.master_seed) {
    flag("manifest master_seed disagrees with config echo");
  }
  if (manifest.meta.image_side != config.image_side) {
    flag("manifest image_side disagrees with config echo");
  }

  // manifest <-> filesystem agreement, binary pixel contract
  std::set<std::string> manifest_paths;
  for (const ManifestRow& row : manifest.rows) {
    if (!manifest_paths.insert(row.relative_path).second) {
      flag("duplicate manifest path: " + row.relative_path);
      continue;
    }
    const fs::path file = dir / row.relative_path;
    if (!fs::exists(file)) {
      flag("missing image file: " + row.relative_path);
      continue;
    }
    try {
      const auto bytes = imageio::read_file(file.string());
      const auto decoded = imageio::decode(bytes);
      ++report.files_checked;
      if (decoded.kind != imageio::ImageKind::kGray8) {
        flag("not a grayscale image: " + row.relative_path);
        continue;
      }
      if (decoded.width != static_cast<std::uint32_t>(config.image_side) ||
          decoded.height != static_cast<std::uint32_t>(config.image_side)) {
        flag("wrong image dimensions: " + row.relative_path);
      }
      if (const auto bad = imageio::find_binary_violation(decoded)) {
        flag("non-binary pixel value " +
             std::to_string(decoded.pixels[*bad]) + " at offset " +
             std::to_string(*bad) + ": " + row.relative_path);
      }
    } catch (const std::exception& e) {
      flag("undecodable image " + row.relative_path + ": " + e.what());
    }
  }

  for (const char* split : {"train", "val", "test"}) {
    const fs::path root = dir / split;
    if (!fs::exists(root)) {
      flag(std::string("missing split directory: ") + split);
      continue;
    }
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel =
          fs::relative(entry.path(), dir).generic_string();
      if (!manifest_paths.contains(rel)) {
        flag("file on disk but not in manifest: " + rel);
      }
    }
  }

  // split balance and quota exactness
  std::map<std::uint32_t, std::array<std::size_t, 3>> split_counts;
  std::map<std::uint32_t, std::array<int, 2>> class_policy;
  for (const ManifestRow& row : manifest.rows) {
    split_counts[row.class_id][static_cast<std::size_t>(row.split)]++;
    const auto it = class_policy.find(row.class_id);
    if (it == class_policy.end()) {
      class_policy[row.class_id] = {row.spacing_used, row.threshold_used};
    } else if (it->second[0] != row.spacing_used ||
               it->second[1] != row.threshold_used) {
      flag("inconsistent selection policy within class " +
           std::to_string(row.class_id));
    }
    const std::string expected_prefix =
        std::string(split_name(row.split)) + "/" +
        class_dir_name(row.class_id) + "/";
    if (row.relative_path.rfind(expected_prefix, 0) != 0) {
      flag("path does not match split/class of its row: " +
           row.relative_path);
    }
    if (row.spacing_used < 1 || row.frame_step % row.spacing_used != 0) {
      flag("frame_step " + std::to_string(row.frame_step) +
           " is not a multiple of spacing_used " +
           std::to_string(row.spacing_used) + ": " + row.relative_path);
    }
  }

  const std::size_t expected_classes = config.grid.class_count();
  if (split_counts.size() != expected_classes) {
    flag("manifest covers " + std::to_string(split_counts.size()) +
         " classes, config says " + std::to_string(expected_classes));
  }
  const std::size_t quota = static_cast<std::size_t>(config.images_per_class);
  for (const auto& [id, counts] : split_counts) {
    const std::size_t total = counts[0] + counts[1] + counts[2];
    if (total != quota) {
      flag("class " + std::to_string(id) + " has " + std::to_string(total) +
           " images, quota is " + std::to_string(quota));
    }
  }
  if (!split_counts.empty()) {
    const auto& expect = split_counts.begin()->second;
    for (const auto& [id, counts] : split_counts) {
      if (counts != expect) {
        flag("class " + std::to_string(id) +
             " split counts differ from class " +
             std::to_string(split_counts.begin()->first));
      }
    }
  }

  // parameter files round-trip against the echoed grid
  try {
    const std::vector<ClassSpec> classes =
        enumerate_classes(config.grid, config.master_seed);
    for (const ClassSpec& spec : classes) {
      const fs::path file =
          dir / "params" / (class_dir_name(spec.class_id) + ".txt");
      if (!fs::exists(file)) {
        flag("missing parameter file: " + file.string());
        continue;
      }
      try {
        const ClassSpec parsed = parse_class_paramfile(slurp(file));
        if (parsed.class_id != spec.class_id ||
            parsed.class_seed != spec.class_seed) {
          flag("parameter file identity mismatch: " + file.string());
        }
        bool same = true;
        for (const ParamField& f : kParamFields) {
          same = same && parsed.params.*(f.field) == spec.params.*(f.field);
        }
        if (!same) {
          flag("parameter values disagree with the config grid: " +
               file.string());
        }
      } catch (const std::exception& e) {
        flag("unreadable parameter file " + file.string() + ": " + e.what());
      }
    }
  } catch (const std::exception& e) {
    flag(std::string("cannot re-enumerate classes: ") + e.what());
  }

  return report;
}

StatsReport compute_stats(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.csv")) {
    throw IoError("missing manifest", (dir / "manifest.csv").string());
  }
  const DatasetManifest manifest =
      parse_manifest_csv(slurp(dir / "manifest.csv"));

  SelectionPolicy defaults;  // ladder usage is judged against these
  if (fs::exists(dir / "config_echo.cfg")) {
    defaults = load_config(dir / "config_echo.cfg", {}).policy;
  }

  std::map<std::uint32_t, std::vector<const ManifestRow*>> by_class;
  for (const ManifestRow& row : manifest.rows) {
    by_class[row.class_id].push_back(&row);
  }

  StatsReport stats;
  stats.classes = by_class.size();
  stats.images = manifest.rows.size();
  double total_active = 0.0;
  bool first_global = true;

  for (const auto& [id, rows] : by_class) {
    ClassStats cs;
    cs.class_id = id;
    bool first = true;
    std::map<std::pair<std::uint32_t, int>, std::size_t> frame_uses;
    for (const ManifestRow* row : rows) {
      switch (row->split) {
        case Split::kTrain: ++cs.train; break;
        case Split::kVal: ++cs.val; break;
        case Split::kTest: ++cs.test; break;
      }
      cs.spacing_used = row->spacing_used;
      cs.threshold_used = row->threshold_used;
      frame_uses[{row->episode_id, row->frame_step}]++;

      const auto bytes = imageio::read_file((dir / row->relative_path).string());
      const auto decoded = imageio::decode(bytes);
      std::size_t active = 0;
      for (std::uint8_t px : decoded.pixels) active += (px == 255) ? 1 : 0;
      cs.active_mean += static_cast<double>(active);
      cs.active_min = first ? active : std::min(cs.active_min, active);
      cs.active_max = first ? active : std::max(cs.active_max, active);
      first = false;
      total_active += static_cast<double>(active);
      stats.active_min =
          first_global ? active : std::min(stats.active_min, active);
      stats.active_max =
          first_global ? active : std::max(stats.active_max, active);
      first_global = false;
    }
    if (!rows.empty()) cs.active_mean /= static_cast<double>(rows.size());
    for (const auto& [key, uses] : frame_uses) {
      if (uses > 1) cs.reused_frames += uses;
    }
    stats.train += cs.train;
    stats.val += cs.val;
    stats.test += cs.test;
    if (cs.spacing_used != defaults.spacing) ++stats.classes_spacing_adjusted;
    if (cs.threshold_used != defaults.threshold) {
      ++stats.classes_threshold_adjusted;
    }
    if (cs.reused_frames > 0) ++stats.classes_with_reuse;
    stats.per_class.push_back(cs);
  }
  if (stats.images > 0) {
    stats.active_mean = total_active / static_cast<double>(stats.images);
  }
  return stats;
}

std::string render_stats(const StatsReport& stats) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line),
                "classes=%zu images=%zu train=%zu val=%zu test=%zu\n",
                stats.classes, stats.images, stats.train, stats.val,
                stats.test);
  out += line;
  std::snprintf(line, sizeof(line),
                "active_px mean=%.1f min=%zu max=%zu\n", stats.active_mean,
                stats.active_min, stats.active_max);
  out += line;
  std::snprintf(line, sizeof(line),
                "ladder: spacing_adjusted=%zu threshold_adjusted=%zu "
                "classes_with_reuse=%zu\n",
                stats.classes_spacing_adjusted,
                stats.classes_threshold_adjusted, stats.classes_with_reuse);
  out += line;
  out += "class  train  val  test  active(mean/min/max)  spacing  threshold"
         "  reused\n";
  for (const ClassStats& cs : stats.per_class) {
    std::snprintf(line, sizeof(line),
                  "%05u  %5zu  %3zu  %4zu  %8.1f/%zu/%zu  %7d  %9d  %6zu\n",
                  cs.class_id, cs.train, cs.val, cs.test, cs.active_mean,
                  cs.active_min, cs.active_max, cs.spacing_used,
                  cs.threshold_used, cs.reused_frames);
    out += line;
  }
  return out;
}

}  // namespace rewave
