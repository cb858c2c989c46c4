#include "rewave/projection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rewave {

namespace {

void check_crop_args(const AugmentationSpec& aug, int side) {
  if (side < 8) throw std::invalid_argument("image side must be >= 8");
  if (!(aug.rotation_deg >= 0.0 && aug.rotation_deg < 360.0)) {
    throw std::invalid_argument("rotation must be in [0,360)");
  }
}

std::uint32_t nearest_or_throw(const RetinaLattice& lat, Vec2 p) {
  const auto idx = lat.nearest_cell(p);
  if (!idx) throw std::logic_error("crop sample point left the retina disc");
  return *idx;
}

}  // namespace

Vec2 augment_point(const AugmentationSpec& aug, Vec2 p) {
  if (aug.mirror) p.x = -p.x;
  const double rad = aug.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

BinaryImage project_cropped(const SimulationFrame& frame,
                            const RetinaLattice& lattice,
                            const AugmentationSpec& aug, int side) {
  check_crop_args(aug, side);

  const double edge = lattice.radius * std::numbers::sqrt2;
  BinaryImage img;
  img.side = side;
  img.pixels.assign(static_cast<std::size_t>(side) * side, 0);

  for (int v = 0; v < side; ++v) {
    const double by = edge * ((v + 0.5) / side - 0.5);
    for (int u = 0; u < side; ++u) {
      const double bx = edge * ((u + 0.5) / side - 0.5);
      const Vec2 p = augment_point(aug, {bx, by});
      const std::uint32_t cell = nearest_or_throw(lattice, p);
      if (frame.state[cell] == CellState::kActive) {
        img.pixels[static_cast<std::size_t>(v) * side + u] = 255;
      }
    }
  }
  return img;
}

RawImage project_raw(const SimulationFrame& frame,
                     const RetinaLattice& lattice) {
  const double radius = lattice.radius;
  const int side = static_cast<int>(std::ceil(2.0 * radius));
  const double r2 = radius * radius;

  RawImage img;
  img.side = side;
  img.rgb.assign(static_cast<std::size_t>(side) * side * 3, 0);

  for (int v = 0; v < side; ++v) {
    const double py = (v + 0.5) - side / 2.0;
    for (int u = 0; u < side; ++u) {
      const double px = (u + 0.5) - side / 2.0;
      if (px * px + py * py > r2) continue;  // outside the disc: (0,0,0)
      const std::uint32_t cell = nearest_or_throw(lattice, {px, py});
      std::uint8_t* out =
          &img.rgb[(static_cast<std::size_t>(v) * side + u) * 3];
      out[0] = static_cast<std::uint8_t>(
          std::llround(255.0 * frame.calcium[cell]));
      switch (frame.state[cell]) {
        case CellState::kReady:      out[1] = kGreenReady; break;
        case CellState::kActive:     out[1] = kGreenActive; break;
        case CellState::kRefractory: out[1] = kGreenRefractory; break;
      }
      out[2] = lattice.cells[cell].boundary ? 255 : 0;
    }
  }
  return img;
}

std::size_t active_pixel_count(const BinaryImage& image) {
  std::size_t n = 0;
  for (std::uint8_t px : image.pixels) n += (px == 255) ? 1 : 0;
  return n;
}

IdentitySampler::IdentitySampler(const RetinaLattice& lattice, int side)
    : side_(side) {
  check_crop_args(AugmentationSpec{}, side);
  cell_of_.reserve(static_cast<std::size_t>(side) * side);
  const double edge = lattice.radius * std::numbers::sqrt2;
  for (int v = 0; v < side; ++v) {
    const double py = edge * ((v + 0.5) / side - 0.5);
    for (int u = 0; u < side; ++u) {
      const double px = edge * ((u + 0.5) / side - 0.5);
      cell_of_.push_back(nearest_or_throw(lattice, {px, py}));
    }
  }
}

std::size_t IdentitySampler::count_active(const SimulationFrame& frame) const {
  std::size_t n = 0;
  for (std::uint32_t cell : cell_of_) {
    n += (frame.state[cell] == CellState::kActive) ? 1 : 0;
  }
  return n;
}

BinaryImage IdentitySampler::project(const SimulationFrame& frame) const {
  BinaryImage img;
  img.side = side_;
  img.pixels.resize(cell_of_.size());
  for (std::size_t k = 0; k < cell_of_.size(); ++k) {
    img.pixels[k] =
        (frame.state[cell_of_[k]] == CellState::kActive) ? 255 : 0;
  }
  return img;
}

}  // namespace rewave
