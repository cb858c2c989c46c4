#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rewave/dynamics.hpp"
#include "rewave/lattice.hpp"
#include "rewave/projection.hpp"

namespace rewave {

// ---------------------------------------------------------------------------
// Wave parameter registry

struct ParamField {
  const char* name;
  double WaveParams::*field;
};

// Declaration order here fixes nothing; grids order axes by their own list.
inline constexpr std::array<ParamField, 6> kParamFields = {{
    {"dendritic_radius", &WaveParams::dendritic_radius},
    {"activation_threshold", &WaveParams::activation_threshold},
    {"propagation_prob", &WaveParams::propagation_prob},
    {"active_duration", &WaveParams::active_duration},
    {"refractory_mean", &WaveParams::refractory_mean},
    {"spontaneous_rate", &WaveParams::spontaneous_rate},
}};

// nullptr when `name` is not a wave parameter.
const ParamField* find_param_field(std::string_view name);

// ---------------------------------------------------------------------------
// Class grids

struct GridAxis {
  std::string name;
  std::vector<double> values;
};

// Cartesian product of per-parameter value lists over a base parameter set.
// Axis order is declaration order; enumeration is lexicographic with the
// last axis fastest.
struct ParameterGrid {
  WaveParams base;
  std::vector<GridAxis> axes;

  std::size_t class_count() const;
  void validate() const;  // throws std::invalid_argument
};

// The four grid values derived from a base value and a spread fraction.
std::vector<double> spread_values(double base, double spread);

struct ClassSpec {
  std::uint32_t class_id = 0;
  WaveParams params;
  std::uint64_t class_seed = 0;
};

std::vector<ClassSpec> enumerate_classes(const ParameterGrid& grid,
                                         std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// Frame selection

struct SelectionPolicy {
  int spacing = 4;     // keep every n-th frame
  int threshold = 50;  // minimum active pixels in the identity projection
  int max_episodes_per_attempt = 50;

  void validate() const;
};

// Steps of `episode` that are multiples of the spacing and whose identity
// projection meets the threshold, in episode order.
std::vector<int> select_frames(const std::vector<SimulationFrame>& episode,
                               const SelectionPolicy& policy,
                               const IdentitySampler& sampler);

// ---------------------------------------------------------------------------
// Splits

enum class Split : std::uint8_t { kTrain = 0, kVal = 1, kTest = 2 };

std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view name);

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

// Per-class split labels for image indices 0..n-1: a seeded shuffle sends
// the first train-fraction of the shuffled order to train, then val, then
// test, so every class contributes identical counts to each split.
// Throws std::invalid_argument when n*ratio values are not integers.
std::vector<Split> assign_splits(std::size_t images_per_class,
                                 const SplitRatios& ratios,
                                 std::uint64_t master_seed,
                                 std::uint32_t class_id);

// ---------------------------------------------------------------------------
// Per-class parameter files

std::string render_class_paramfile(const ClassSpec& spec);
ClassSpec parse_class_paramfile(std::string_view text);  // throws on bad input

// ---------------------------------------------------------------------------
// Class generation

struct ManifestRow {
  std::string relative_path;
  std::uint32_t class_id = 0;
  Split split = Split::kTrain;
  std::uint32_t episode_id = 0;
  int frame_step = 0;
  bool mirror = false;
  double rotation_deg = 0.0;
  int spacing_used = 0;
  int threshold_used = 0;
};

struct ClassGenContext {
  const RetinaLattice* lattice = nullptr;
  GlobalDynamicsConfig globals;
  SelectionPolicy policy;
  SplitRatios ratios;
  int image_side = 256;
  int quota = 0;  // images per class
  std::uint64_t master_seed = 0;
};

using ImageSink = std::function<void(const std::string& relative_path,
                                     std::span<const std::uint8_t> png)>;

std::string class_dir_name(std::uint32_t class_id);
std::string image_file_name(std::uint32_t image_index);

// Simulates episodes seeded from the class seed, selects frames under the
// (possibly ladder-adjusted) policy, augments, projects, encodes and hands
// each PNG to `sink`.  Returns one manifest row per image, in image order.
// Throws ClassGenerationError when no frame can ever pass selection.
std::vector<ManifestRow> generate_class(const ClassSpec& spec,
                                        const ClassGenContext& ctx,
                                        const ImageSink& sink);

}  // namespace rewave
