#pragma once

#include <cstdint>
#include <vector>

#include "rewave/dynamics.hpp"
#include "rewave/lattice.hpp"

namespace rewave {

// Mirror flips the x coordinate; rotation is applied after mirroring,
// counter-clockwise about the origin.
struct AugmentationSpec {
  bool mirror = false;
  double rotation_deg = 0.0;  // [0, 360)
};

Vec2 augment_point(const AugmentationSpec& aug, Vec2 p);

// Square crop whose corners touch the retina circle.  Pixels are 0 or 255.
struct BinaryImage {
  int side = 0;
  std::vector<std::uint8_t> pixels;  // row-major, side*side
};

// Full-retina render at 1-unit pixel pitch.  Channels per pixel:
//   red   = round(255 * calcium)
//   green = 0 READY, 85 REFRACTORY, 170 ACTIVE
//   blue  = 255 when the nearest cell sits on the disc rim
// Pixels outside the disc are (0,0,0).
struct RawImage {
  int side = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

inline constexpr std::uint8_t kGreenReady = 0;
inline constexpr std::uint8_t kGreenRefractory = 85;
inline constexpr std::uint8_t kGreenActive = 170;

// Samples the inscribed square (edge = radius*sqrt(2)) through the
// augmentation transform; pixel = 255 iff the nearest cell is ACTIVE.
// Throws std::invalid_argument for side < 8 or rotation out of range.
BinaryImage project_cropped(const SimulationFrame& frame,
                            const RetinaLattice& lattice,
                            const AugmentationSpec& aug, int side);

RawImage project_raw(const SimulationFrame& frame,
                     const RetinaLattice& lattice);

std::size_t active_pixel_count(const BinaryImage& image);

// Pixel-to-cell map for the identity augmentation, precomputed once per
// (lattice, side).  Frame selection projects thousands of frames with the
// identity transform; caching the nearest-cell lookups makes that cheap.
class IdentitySampler {
 public:
  IdentitySampler(const RetinaLattice& lattice, int side);

  std::size_t count_active(const SimulationFrame& frame) const;
  BinaryImage project(const SimulationFrame& frame) const;
  int side() const { return side_; }

 private:
  int side_;
  std::vector<std::uint32_t> cell_of_;
};

}  // namespace rewave
