#include "rewave/manifest.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>

#include "rewave/textio.hpp"

namespace rewave {

namespace {

constexpr const char* kHeader =
    "relative_path,class_id,split,episode_id,frame_step,mirror,rotation_deg,"
    "spacing_used,threshold_used";

void fail(const std::string& what) { throw std::runtime_error(what); }

}  // namespace

DatasetManifest build_manifest(std::vector<ManifestRow> rows,
                               ManifestMetadata meta) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ManifestRow& a, const ManifestRow& b) {
                     return a.class_id < b.class_id;
                   });

  std::set<std::string_view> paths;
  for (const ManifestRow& row : rows) {
    if (!paths.insert(row.relative_path).second) {
      fail("duplicate manifest path: " + row.relative_path);
    }
  }

  // balanced splits: every class contributes the same count to each split
  std::map<std::uint32_t, std::array<std::size_t, 3>> per_class;
  for (const ManifestRow& row : rows) {
    per_class[row.class_id][static_cast<std::size_t>(row.split)]++;
  }
  if (!per_class.empty()) {
    const auto& expect = per_class.begin()->second;
    for (const auto& [id, counts] : per_class) {
      if (counts != expect) {
        fail("unbalanced split counts for class " + std::to_string(id));
      }
    }
  }

  DatasetManifest m;
  m.meta = std::move(meta);
  m.rows = std::move(rows);
  return m;
}

std::string render_manifest_csv(const DatasetManifest& manifest) {
  std::string out;
  out += "#master_seed=" + std::to_string(manifest.meta.master_seed) + "\n";
  out += "#image_side=" + std::to_string(manifest.meta.image_side) + "\n";
  out += "#grid=" + manifest.meta.grid_desc + "\n";
  out += "#tool_version=" + manifest.meta.tool_version + "\n";
  out += kHeader;
  out += '\n';
  for (const ManifestRow& r : manifest.rows) {
    out += r.relative_path;
    out += ',';
    out += std::to_string(r.class_id);
    out += ',';
    out += split_name(r.split);
    out += ',';
    out += std::to_string(r.episode_id);
    out += ',';
    out += std::to_string(r.frame_step);
    out += ',';
    out += r.mirror ? '1' : '0';
    out += ',';
    out += textio::format_double(r.rotation_deg);
    out += ',';
    out += std::to_string(r.spacing_used);
    out += ',';
    out += std::to_string(r.threshold_used);
    out += '\n';
  }
  return out;
}

DatasetManifest parse_manifest_csv(std::string_view text) {
  DatasetManifest m;
  bool saw_header = false;

  for (std::string_view raw : textio::split(text, '\n')) {
    const std::string_view line = textio::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) fail("bad manifest metadata line");
      const std::string_view key = line.substr(1, eq - 1);
      const std::string_view value = line.substr(eq + 1);
      if (key == "master_seed") {
        const auto v = textio::parse_u64(value);
        if (!v) fail("bad manifest master_seed");
        m.meta.master_seed = *v;
      } else if (key == "image_side") {
        const auto v = textio::parse_i64(value);
        if (!v) fail("bad manifest image_side");
        m.meta.image_side = static_cast<int>(*v);
      } else if (key == "grid") {
        m.meta.grid_desc = std::string(value);
      } else if (key == "tool_version") {
        m.meta.tool_version = std::string(value);
      } else {
        fail("unknown manifest metadata key: " + std::string(key));
      }
      continue;
    }
    if (!saw_header) {
      if (line != kHeader) fail("unexpected manifest header row");
      saw_header = true;
      continue;
    }

    const auto fields = textio::split(line, ',');
    if (fields.size() != 9) {
      fail("manifest row has wrong field count: " + std::string(line));
    }
    ManifestRow r;
    r.relative_path = std::string(fields[0]);
    const auto id = textio::parse_u64(fields[1]);
    const auto split = parse_split(fields[2]);
    const auto episode = textio::parse_u64(fields[3]);
    const auto step = textio::parse_i64(fields[4]);
    const auto rot = textio::parse_double(fields[6]);
    const auto spacing = textio::parse_i64(fields[7]);
    const auto threshold = textio::parse_i64(fields[8]);
    if (!id || !split || !episode || !step || !rot || !spacing || !threshold ||
        (fields[5] != "0" && fields[5] != "1")) {
      fail("malformed manifest row: " + std::string(line));
    }
    r.class_id = static_cast<std::uint32_t>(*id);
    r.split = *split;
    r.episode_id = static_cast<std::uint32_t>(*episode);
    r.frame_step = static_cast<int>(*step);
    r.mirror = fields[5] == "1";
    r.rotation_deg = *rot;
    r.spacing_used = static_cast<int>(*spacing);
    r.threshold_used = static_cast<int>(*threshold);
    m.rows.push_back(std::move(r));
  }
  if (!saw_header) fail("manifest has no header row");
  return m;
}

}  // namespace rewave
