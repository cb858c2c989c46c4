#include "rewave/datasetgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

#include "rewave/errors.hpp"
#include "rewave/imageio.hpp"
#include "rewave/textio.hpp"

namespace rewave {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const ParamField* find_param_field(std::string_view name) {
  for (const ParamField& f : kParamFields) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Class grids

std::size_t ParameterGrid::class_count() const {
  std::size_t n = 1;
  for (const GridAxis& axis : axes) n *= axis.values.size();
  return n;
}

void ParameterGrid::validate() const {
  base.validate();
  require(!axes.empty(), "parameter grid has no altered parameters");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const GridAxis& axis = axes[a];
    const ParamField* field = find_param_field(axis.name);
    require(field != nullptr, "unknown wave parameter: " + axis.name);
    require(!axis.values.empty(),
            "empty value list for parameter: " + axis.name);
    for (std::size_t b = a + 1; b < axes.size(); ++b) {
      require(axes[b].name != axis.name,
              "duplicate grid parameter: " + axis.name);
    }
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      WaveParams probe = base;
      probe.*(field->field) = axis.values[i];
      try {
        probe.validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("grid value " +
                                    textio::format_double(axis.values[i]) +
                                    " for " + axis.name + ": " + e.what());
      }
      for (std::size_t j = i + 1; j < axis.values.size(); ++j) {
        require(axis.values[i] != axis.values[j],
                "repeated grid value for parameter: " + axis.name);
      }
    }
  }
}

std::vector<double> spread_values(double base, double spread) {
  return {base * (1.0 - spread), base * (1.0 - spread / 3.0),
          base * (1.0 + spread / 3.0), base * (1.0 + spread)};
}

std::vector<ClassSpec> enumerate_classes(const ParameterGrid& grid,
                                         std::uint64_t master_seed) {
  grid.validate();
  const std::size_t total = grid.class_count();

  std::vector<ClassSpec> classes;
  classes.reserve(total);
  for (std::size_t id = 0; id < total; ++id) {
    ClassSpec spec;
    spec.class_id = static_cast<std::uint32_t>(id);
    spec.class_seed = rng::mix(master_seed, id);
    spec.params = grid.base;
    // lexicographic: first axis slowest, last axis fastest
    std::size_t rem = id;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      const GridAxis& axis = grid.axes[a];
      const std::size_t k = rem % axis.values.size();
      rem /= axis.values.size();
      spec.params.*(find_param_field(axis.name)->field) = axis.values[k];
    }
    classes.push_back(std::move(spec));
  }
  return classes;
}

// ---------------------------------------------------------------------------
// Frame selection

void SelectionPolicy::validate() const {
  require(spacing >= 1, "selection spacing must be >= 1");
  require(threshold >= 1, "selection threshold must be >= 1");
  require(max_episodes_per_attempt >= 1,
          "max_episodes_per_attempt must be >= 1");
}

std::vector<int> select_frames(const std::vector<SimulationFrame>& episode,
                               const SelectionPolicy& policy,
                               const IdentitySampler& sampler) {
  policy.validate();
  std::vector<int> steps;
  for (const SimulationFrame& f : episode) {
    if (f.step % policy.spacing != 0) continue;
    if (sampler.count_active(f) >=
        static_cast<std::size_t>(policy.threshold)) {
      steps.push_back(f.step);
    }
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Splits

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

namespace {

std::size_t exact_share(std::size_t n, double ratio, const char* which) {
  const double want = static_cast<double>(n) * ratio;
  const double rounded = std::floor(want + 0.5);
  if (std::abs(want - rounded) > 1e-9) {
    throw std::invalid_argument(
        std::string("images per class times the ") + which +
        " ratio is not an integer; balanced splits need exact counts");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::vector<Split> assign_splits(std::size_t images_per_class,
                                 const SplitRatios& ratios,
                                 std::uint64_t master_seed,
                                 std::uint32_t class_id) {
  const std::size_t n = images_per_class;
  require(n >= 1, "images_per_class must be >= 1");
  const std::size_t n_train = exact_share(n, ratios.train, "train");
  const std::size_t n_val = exact_share(n, ratios.val, "val");
  const std::size_t n_test = exact_share(n, ratios.test, "test");
  require(n_train + n_val + n_test == n, "split ratios must sum to 1");

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const rng::Stream shuffle(
      rng::mix(master_seed, class_id, rng::hash_label("split")));
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = shuffle.below(i, i + 1);
    std::swap(order[i], order[j]);
  }

  std::vector<Split> labels(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Split s = k < n_train             ? Split::kTrain
                    : k < n_train + n_val   ? Split::kVal
                                            : Split::kTest;
    labels[order[k]] = s;
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Per-class parameter files

std::string render_class_paramfile(const ClassSpec& spec) {
  std::map<std::string, std::string> kv;
  for (const ParamField& f : kParamFields) {
    kv[f.name] = textio::format_double(spec.params.*(f.field));
  }
  kv["class_id"] = std::to_string(spec.class_id);
  kv["class_seed"] = std::to_string(spec.class_seed);

  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

ClassSpec parse_class_paramfile(std::string_view text) {
  ClassSpec spec;
  bool saw_id = false;
  bool saw_seed = false;
  std::array<bool, kParamFields.size()> saw_param{};

  for (std::string_view line : textio::split(text, '\n')) {
    line = textio::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    require(eq != std::string_view::npos,
            "parameter file line lacks '=': " + std::string(line));
    const std::string_view key = textio::trim(line.substr(0, eq));
    const std::string_view value = textio::trim(line.substr(eq + 1));
    if (key == "class_id") {
      const auto v = textio::parse_u64(value);
      require(v.has_value(), "bad class_id value");
      spec.class_id = static_cast<std::uint32_t>(*v);
      saw_id = true;
    } else if (key == "class_seed") {
      const auto v = textio::parse_u64(value);
      require(v.has_value(), "bad class_seed value");
      spec.class_seed = *v;
      saw_seed = true;
    } else if (const ParamField* f = find_param_field(key)) {
      const auto v = textio::parse_double(value);
      require(v.has_value(), "bad value for " + std::string(key));
      spec.params.*(f->field) = *v;
      saw_param[static_cast<std::size_t>(f - kParamFields.data())] = true;
    } else {
      throw std::invalid_argument("unknown parameter file key: " +
                                  std::string(key));
    }
  }
  require(saw_id && saw_seed, "parameter file missing class_id/class_seed");
  for (std::size_t k = 0; k < saw_param.size(); ++k) {
    require(saw_param[k], std::string("parameter file missing ") +
                              kParamFields[k].name);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Class generation

std::string class_dir_name(std::uint32_t class_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "class_%05u", class_id);
  return buf;
}

std::string image_file_name(std::uint32_t image_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img_%06u.png", image_index);
  return buf;
}

namespace {

struct Candidate {
  std::uint32_t episode_id;
  int frame_step;
};

struct PlannedImage {
  Candidate source;
  std::uint32_t image_index;
  AugmentationSpec aug;
};

AugmentationSpec draw_augmentation(std::uint64_t class_seed,
                                   std::uint32_t image_index) {
  const rng::Stream s(
      rng::mix(class_seed, rng::hash_label("aug"), image_index));
  AugmentationSpec aug;
  aug.mirror = s.uniform01(0) < 0.5;
  aug.rotation_deg = s.uniform01(1) * 360.0;
  return aug;
}

}  // namespace

std::vector<ManifestRow> generate_class(const ClassSpec& spec,
                                        const ClassGenContext& ctx,
                                        const ImageSink& sink) {
  const RetinaLattice& lattice = *ctx.lattice;
  spec.params.validate();
  ctx.policy.validate();
  require(ctx.quota >= 1, "images per class must be >= 1");

  const IdentitySampler sampler(lattice, ctx.image_side);
  const NeighborTable nbr = neighbors(lattice, spec.params.dendritic_radius);
  const std::size_t quota = static_cast<std::size_t>(ctx.quota);

  // --- selection, with the adjustment ladder ------------------------------
  int spacing = ctx.policy.spacing;
  int threshold = ctx.policy.threshold;
  bool reuse = false;

  std::vector<Candidate> pool;
  const auto select_episode = [&](std::uint32_t episode_id) {
    const std::uint64_t seed = rng::mix(spec.class_seed, episode_id);
    // stop stepping once the pool is full; only the first `quota`
    // candidates in (episode, step) order are ever used
    run_episode(lattice, nbr, spec.params, ctx.globals, seed,
                [&](const SimulationFrame& f) {
                  if (pool.size() >= quota) return false;
                  if (f.step % spacing == 0 &&
                      sampler.count_active(f) >=
                          static_cast<std::size_t>(threshold)) {
                    pool.push_back({episode_id, f.step});
                  }
                  return pool.size() < quota;
                });
  };

  int episodes_simulated = 0;
  for (int ep = 0; ep < ctx.policy.max_episodes_per_attempt; ++ep) {
    select_episode(static_cast<std::uint32_t>(ep));
    episodes_simulated = ep + 1;
    if (pool.size() >= quota) break;
  }

  while (pool.size() < quota) {
    if (spacing > 1) {
      spacing -= 1;
    } else if (threshold > 1) {
      threshold = std::max(1, threshold / 2);
    } else if (!pool.empty()) {
      reuse = true;  // cycle the pool with fresh augmentations
      break;
    } else {
      throw ClassGenerationError(
          spec.class_id,
          "no frame ever met the selection threshold, even at spacing 1 and "
          "threshold 1");
    }
    pool.clear();
    for (int ep = 0; ep < episodes_simulated && pool.size() < quota; ++ep) {
      select_episode(static_cast<std::uint32_t>(ep));
    }
  }
  (void)reuse;

  // --- emission plan -------------------------------------------------------
  const std::vector<Split> splits =
      assign_splits(quota, ctx.ratios, ctx.master_seed, spec.class_id);

  std::vector<PlannedImage> plan(quota);
  for (std::uint32_t img = 0; img < quota; ++img) {
    plan[img].source = pool[img % pool.size()];
    plan[img].image_index = img;
    plan[img].aug = draw_augmentation(spec.class_seed, img);
  }

  // group by (episode, step) so each involved episode is re-simulated once
  std::vector<std::uint32_t> order(quota);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     const Candidate& ca = plan[a].source;
                     const Candidate& cb = plan[b].source;
                     if (ca.episode_id != cb.episode_id)
                       return ca.episode_id < cb.episode_id;
                     return ca.frame_step < cb.frame_step;
                   });

  std::vector<ManifestRow> rows(quota);
  const std::string dir = class_dir_name(spec.class_id);

  std::size_t cursor = 0;
  while (cursor < order.size()) {
    const std::uint32_t episode_id = plan[order[cursor]].source.episode_id;
    const std::uint64_t seed = rng::mix(spec.class_seed, episode_id);
    run_episode(lattice, nbr, spec.params, ctx.globals, seed,
                [&](const SimulationFrame& f) {
                  while (cursor < order.size()) {
                    const PlannedImage& pl = plan[order[cursor]];
                    if (pl.source.episode_id != episode_id ||
                        pl.source.frame_step != f.step) {
                      break;
                    }
                    const BinaryImage img =
                        project_cropped(f, lattice, pl.aug, ctx.image_side);
                    const std::vector<std::uint8_t> png =
                        imageio::encode_binary(img);
                    ManifestRow row;
                    row.class_id = spec.class_id;
                    row.split = splits[pl.image_index];
                    row.relative_path = std::string(split_name(row.split)) +
                                        "/" + dir + "/" +
                                        image_file_name(pl.image_index);
                    row.episode_id = episode_id;
                    row.frame_step = f.step;
                    row.mirror = pl.aug.mirror;
                    row.rotation_deg = pl.aug.rotation_deg;
                    row.spacing_used = spacing;
                    row.threshold_used = threshold;
                    sink(row.relative_path, png);
                    rows[pl.image_index] = std::move(row);
                    ++cursor;
                  }
                  // keep stepping only while this episode still owes images
                  return cursor < order.size() &&
                         plan[order[cursor]].source.episode_id == episode_id;
                });
  }
  return rows;
}

}  // namespace rewave
