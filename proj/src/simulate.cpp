#include "rewave/simulate.hpp"

#include <cstdio>

#include "rewave/errors.hpp"
#include "rewave/imageio.hpp"

namespace rewave {

namespace fs = std::filesystem;

int run_simulate(const GeneratorConfig& config,
                 const SimulateOptions& options) {
  config.validate();
  if (options.out_dir.empty()) throw ConfigError("no output directory given");

  WaveParams params = config.grid.base;
  std::uint64_t stream_seed = config.master_seed;
  if (options.class_id) {
    const std::vector<ClassSpec> classes =
        enumerate_classes(config.grid, config.master_seed);
    if (*options.class_id >= classes.size()) {
      throw ConfigError("class id " + std::to_string(*options.class_id) +
                        " out of range; grid has " +
                        std::to_string(classes.size()) + " classes");
    }
    params = classes[*options.class_id].params;
    stream_seed = classes[*options.class_id].class_seed;
  }
  const std::uint64_t episode_seed = rng::mix(stream_seed, options.episode);

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw IoError("cannot create output directory",
                        options.out_dir.string());

  const RetinaLattice lattice = build_lattice(config.retina_radius);
  const NeighborTable nbr = neighbors(lattice, params.dendritic_radius);
  const AugmentationSpec identity;

  return run_episode(
      lattice, nbr, params, config.dynamics, episode_seed,
      [&](const SimulationFrame& frame) {
        char name[48];
        std::snprintf(name, sizeof(name), "ep%u_t%05d.png", options.episode,
                      frame.step);
        const std::vector<std::uint8_t> png =
            options.cropped
                ? imageio::encode_binary(project_cropped(
                      frame, lattice, identity, config.image_side))
                : imageio::encode_raw(project_raw(frame, lattice));
        imageio::write_file((options.out_dir / name).string(), png);
        return true;
      });
}

}  // namespace rewave
