#include "rewave/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rewave/errors.hpp"
#include "rewave/textio.hpp"

namespace rewave {

namespace {

using KvMap = std::map<std::string, std::string>;  // "section.key" -> value

KvMap parse_sections(std::string_view text) {
  KvMap map;
  std::string section;
  std::size_t line_no = 0;
  for (std::string_view raw : textio::split(text, '\n')) {
    ++line_no;
    const std::string_view line = textio::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("bad section header on line " +
                          std::to_string(line_no));
      }
      section = std::string(textio::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key=value on line " +
                        std::to_string(line_no));
    }
    const std::string key(textio::trim(line.substr(0, eq)));
    const std::string value(textio::trim(line.substr(eq + 1)));
    if (section.empty()) {
      throw ConfigError("key outside any [section] on line " +
                        std::to_string(line_no));
    }
    map[section + "." + key] = value;
  }
  return map;
}

double need_double(const KvMap& map, const std::string& key, double fallback,
                   std::set<std::string>& used) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  used.insert(key);
  const auto v = textio::parse_double(it->second);
  if (!v) throw ConfigError("bad number for " + key + ": " + it->second);
  return *v;
}

long long need_int(const KvMap& map, const std::string& key,
                   long long fallback, std::set<std::string>& used) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  used.insert(key);
  const auto v = textio::parse_i64(it->second);
  if (!v) throw ConfigError("bad integer for " + key + ": " + it->second);
  return *v;
}

std::uint64_t need_u64(const KvMap& map, const std::string& key,
                       std::uint64_t fallback, std::set<std::string>& used) {
  const auto it = map.find(key);
  if (it == map.end()) return fallback;
  used.insert(key);
  const auto v = textio::parse_u64(it->second);
  if (!v) throw ConfigError("bad unsigned integer for " + key + ": " +
                            it->second);
  return *v;
}

std::vector<std::string> need_list(const KvMap& map, const std::string& key,
                                   std::set<std::string>& used) {
  const auto it = map.find(key);
  if (it == map.end()) return {};
  used.insert(key);
  std::vector<std::string> out;
  for (std::string_view part : textio::split(it->second, ',')) {
    const std::string_view token = textio::trim(part);
    if (!token.empty()) out.emplace_back(token);
  }
  return out;
}

}  // namespace

void GeneratorConfig::validate() const {
  try {
    grid.validate();
    policy.validate();
    dynamics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(retina_radius >= 1.0)) throw ConfigError("retina_radius must be >= 1");
  if (image_side < 8) throw ConfigError("image_side must be >= 8");
  if (images_per_class < 1) throw ConfigError("images_per_class must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0) {
    throw ConfigError("split ratios must be non-negative");
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-12) {
    throw ConfigError("split ratios must sum to 1");
  }
  try {
    // exercises the exact-count rule (quota divisible by the ratio
    // denominator) without touching any rng
    assign_splits(static_cast<std::size_t>(images_per_class), ratios, 0, 0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string GeneratorConfig::grid_description() const {
  std::string out;
  for (const GridAxis& axis : grid.axes) {
    if (!out.empty()) out += ';';
    out += axis.name;
    out += '=';
    for (std::size_t k = 0; k < axis.values.size(); ++k) {
      if (k) out += '|';
      out += textio::format_double(axis.values[k]);
    }
  }
  return out;
}

GeneratorConfig parse_config_text(std::string_view text,
                                  const std::vector<std::string>& overrides) {
  KvMap map = parse_sections(text);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos || ov.find('.') == std::string::npos ||
        ov.find('.') > eq) {
      throw ConfigError("override must look like section.key=value: " + ov);
    }
    map[std::string(textio::trim(std::string_view(ov).substr(0, eq)))] =
        std::string(textio::trim(std::string_view(ov).substr(eq + 1)));
  }

  std::set<std::string> used;
  GeneratorConfig cfg;

  cfg.master_seed = need_u64(map, "generator.master_seed", 42, used);
  cfg.retina_radius =
      need_double(map, "generator.retina_radius", 160.0, used);
  cfg.image_side =
      static_cast<int>(need_int(map, "generator.image_side", 256, used));
  cfg.images_per_class = static_cast<int>(
      need_int(map, "generator.images_per_class", 1000, used));
  cfg.workers = static_cast<int>(need_int(map, "generator.workers", 0, used));
  if (const auto it = map.find("generator.output_dir"); it != map.end()) {
    cfg.output_dir = it->second;
    used.insert(it->first);
  }

  WaveParams base;
  for (const ParamField& f : kParamFields) {
    base.*(f.field) = need_double(map, std::string("base_params.") + f.name,
                                  base.*(f.field), used);
  }
  cfg.grid.base = base;

  const double default_spread =
      need_double(map, "grid.spread", 0.5, used);
  const std::vector<std::string> altered =
      need_list(map, "grid.altered", used);
  if (altered.empty()) {
    throw ConfigError("grid.altered must list at least one parameter");
  }
  for (const std::string& name : altered) {
    const ParamField* field = find_param_field(name);
    if (!field) throw ConfigError("grid.altered names unknown parameter: " + name);
    GridAxis axis;
    axis.name = name;
    const std::string values_key = "grid.values." + name;
    if (const auto it = map.find(values_key); it != map.end()) {
      used.insert(values_key);
      for (std::string_view part : textio::split(it->second, ',')) {
        const auto v = textio::parse_double(textio::trim(part));
        if (!v) throw ConfigError("bad number in " + values_key);
        axis.values.push_back(*v);
      }
    } else {
      const double spread = need_double(map, "grid.spread." + name,
                                        default_spread, used);
      axis.values = spread_values(base.*(field->field), spread);
    }
    cfg.grid.axes.push_back(std::move(axis));
  }

  cfg.policy.spacing =
      static_cast<int>(need_int(map, "selection.spacing", 4, used));
  cfg.policy.threshold =
      static_cast<int>(need_int(map, "selection.threshold", 50, used));
  cfg.policy.max_episodes_per_attempt = static_cast<int>(
      need_int(map, "selection.max_episodes_per_attempt", 50, used));

  cfg.dynamics.refractory_jitter =
      need_double(map, "dynamics.refractory_jitter", 0.2, used);
  cfg.dynamics.calcium_decay =
      need_double(map, "dynamics.calcium_decay", 10.0, used);
  cfg.dynamics.max_steps =
      static_cast<int>(need_int(map, "dynamics.max_steps", 2000, used));

  cfg.ratios.train = need_double(map, "split.train", 0.8, used);
  cfg.ratios.val = need_double(map, "split.val", 0.1, used);
  cfg.ratios.test = need_double(map, "split.test", 0.1, used);

  for (const auto& [key, value] : map) {
    if (!used.contains(key)) {
      throw ConfigError("unknown config key: " + key);
    }
  }

  cfg.validate();
  return cfg;
}

GeneratorConfig load_config(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

std::string render_config_echo(const GeneratorConfig& config) {
  std::string out;
  out += "# effective configuration (runtime-only keys omitted)\n";
  out += "[generator]\n";
  out += "master_seed = " + std::to_string(config.master_seed) + "\n";
  out += "retina_radius = " + textio::format_double(config.retina_radius) + "\n";
  out += "image_side = " + std::to_string(config.image_side) + "\n";
  out += "images_per_class = " + std::to_string(config.images_per_class) + "\n";
  out += "\n[base_params]\n";
  for (const ParamField& f : kParamFields) {
    out += std::string(f.name) + " = " +
           textio::format_double(config.grid.base.*(f.field)) + "\n";
  }
  out += "\n[grid]\n";
  out += "altered = ";
  for (std::size_t a = 0; a < config.grid.axes.size(); ++a) {
    if (a) out += ", ";
    out += config.grid.axes[a].name;
  }
  out += "\n";
  for (const GridAxis& axis : config.grid.axes) {
    out += "values." + axis.name + " = ";
    for (std::size_t k = 0; k < axis.values.size(); ++k) {
      if (k) out += ", ";
      out += textio::format_double(axis.values[k]);
    }
    out += "\n";
  }
  out += "\n[selection]\n";
  out += "spacing = " + std::to_string(config.policy.spacing) + "\n";
  out += "threshold = " + std::to_string(config.policy.threshold) + "\n";
  out += "max_episodes_per_attempt = " +
         std::to_string(config.policy.max_episodes_per_attempt) + "\n";
  out += "\n[dynamics]\n";
  out += "refractory_jitter = " +
         textio::format_double(config.dynamics.refractory_jitter) + "\n";
  out += "calcium_decay = " +
         textio::format_double(config.dynamics.calcium_decay) + "\n";
  out += "max_steps = " + std::to_string(config.dynamics.max_steps) + "\n";
  out += "\n[split]\n";
  out += "train = " + textio::format_double(config.ratios.train) + "\n";
  out += "val = " + textio::format_double(config.ratios.val) + "\n";
  out += "test = " + textio::format_double(config.ratios.test) + "\n";
  return out;
}

}  // namespace rewave
