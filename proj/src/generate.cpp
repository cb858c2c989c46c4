#include "rewave/generate.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "rewave/errors.hpp"
#include "rewave/imageio.hpp"
#include "rewave/manifest.hpp"
#include "rewave/version.hpp"

namespace rewave {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create file", path.string());
  out << text;
  if (!out) throw IoError("write failed", path.string());
}

int resolve_threads(const GeneratorConfig& config, const RunOptions& opt) {
  int n = opt.threads > 0 ? opt.threads : config.workers;
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

}  // namespace

void run_generate(const GeneratorConfig& config, const RunOptions& options) {
  config.validate();

  const fs::path out = options.out_dir;
  if (out.empty()) throw ConfigError("no output directory given");
  std::error_code ec;
  if (fs::exists(out, ec) && !fs::is_empty(out, ec)) {
    throw ConfigError("output directory is not empty: " + out.string());
  }

  fs::create_directories(out / "params", ec);
  if (ec) throw IoError("cannot create output directory", out.string());
  for (const char* split : {"train", "val", "test"}) {
    fs::create_directories(out / split, ec);
    if (ec) throw IoError("cannot create split directory",
                          (out / split).string());
  }

  write_text(out / "config_echo.cfg", render_config_echo(config));

  const RetinaLattice lattice = build_lattice(config.retina_radius);
  const std::vector<ClassSpec> classes =
      enumerate_classes(config.grid, config.master_seed);

  ClassGenContext ctx;
  ctx.lattice = &lattice;
  ctx.globals = config.dynamics;
  ctx.policy = config.policy;
  ctx.ratios = config.ratios;
  ctx.image_side = config.image_side;
  ctx.quota = config.images_per_class;
  ctx.master_seed = config.master_seed;

  const int n_threads =
      std::min<int>(resolve_threads(config, options),
                    static_cast<int>(classes.size()));
  std::vector<std::vector<ManifestRow>> results(classes.size());
  std::vector<std::exception_ptr> failures(classes.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= classes.size()) return;
      try {
        const ClassSpec& spec = classes[k];
        write_text(out / "params" / (class_dir_name(spec.class_id) + ".txt"),
                   render_class_paramfile(spec));
        const ImageSink sink = [&](const std::string& rel,
                                   std::span<const std::uint8_t> png) {
          const fs::path target = out / rel;
          std::error_code dir_ec;
          fs::create_directories(target.parent_path(), dir_ec);
          if (dir_ec) {
            throw IoError("cannot create class directory",
                          target.parent_path().string());
          }
          imageio::write_file(target.string(), png);
        };
        results[k] = generate_class(spec, ctx, sink);
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  // deterministic error reporting: lowest class id wins
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (failures[k]) std::rethrow_exception(failures[k]);
  }

  std::vector<ManifestRow> rows;
  rows.reserve(classes.size() * static_cast<std::size_t>(config.images_per_class));
  for (std::vector<ManifestRow>& r : results) {
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  }

  ManifestMetadata meta;
  meta.master_seed = config.master_seed;
  meta.image_side = config.image_side;
  meta.grid_desc = config.grid_description();
  meta.tool_version = kToolVersion;
  const DatasetManifest manifest = build_manifest(std::move(rows), meta);
  write_text(out / "manifest.csv", render_manifest_csv(manifest));
}

}  // namespace rewave
