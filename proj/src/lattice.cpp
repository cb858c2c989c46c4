#include "rewave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rewave {

namespace {

constexpr double kRowPitchFactor = 0.8660254037844386;  // sqrt(3)/2

int bucket_coord(double v, int grid_min, int grid_dim) {
  int b = static_cast<int>(std::floor(v));
  return std::clamp(b, grid_min, grid_min + grid_dim - 1);
}

}  // namespace

RetinaLattice build_lattice(double radius) {
  if (!(radius >= 1.0)) {
    throw std::invalid_argument("retina radius must be >= 1");
  }

  RetinaLattice lat;
  lat.radius = radius;

  const double row_pitch = kRowPitchFactor;
  const double r2 = radius * radius;
  const int r_max = static_cast<int>(std::floor(radius / row_pitch)) + 1;

  for (int r = -r_max; r <= r_max; ++r) {
    const double y = r * row_pitch;
    const double w2 = r2 - y * y;
    if (w2 < -kGeomEps) continue;
    const double w = std::sqrt(std::max(w2, 0.0));
    // x = q + r/2; generous q range, then the exact disc predicate decides.
    const int q_lo = static_cast<int>(std::floor(-w - 0.5 * r)) - 1;
    const int q_hi = static_cast<int>(std::ceil(w - 0.5 * r)) + 1;
    for (int q = q_lo; q <= q_hi; ++q) {
      const double x = q + 0.5 * r;
      if (x * x + y * y > r2 + kGeomEps) continue;
      Cell c;
      c.index = static_cast<std::uint32_t>(lat.cells.size());
      c.axial_q = q;
      c.axial_r = r;
      c.pos = {x, y};
      c.boundary = (radius - std::sqrt(x * x + y * y)) < 1.0;
      lat.cells.push_back(c);
    }
  }

  // bucket grid, 1-unit buckets
  const int half = static_cast<int>(std::ceil(radius)) + 1;
  lat.grid_min = -half;
  lat.grid_dim = 2 * half;
  const std::size_t n_buckets =
      static_cast<std::size_t>(lat.grid_dim) * lat.grid_dim;

  std::vector<std::uint32_t> counts(n_buckets, 0);
  auto bucket_of = [&](const Vec2& p) {
    const int bx = bucket_coord(p.x, lat.grid_min, lat.grid_dim);
    const int by = bucket_coord(p.y, lat.grid_min, lat.grid_dim);
    return static_cast<std::size_t>(by - lat.grid_min) * lat.grid_dim +
           (bx - lat.grid_min);
  };
  for (const Cell& c : lat.cells) counts[bucket_of(c.pos)]++;

  lat.bucket_offsets.assign(n_buckets + 1, 0);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    lat.bucket_offsets[b + 1] = lat.bucket_offsets[b] + counts[b];
  }
  lat.bucket_cells.resize(lat.cells.size());
  std::vector<std::uint32_t> cursor(lat.bucket_offsets.begin(),
                                    lat.bucket_offsets.end() - 1);
  for (const Cell& c : lat.cells) {
    lat.bucket_cells[cursor[bucket_of(c.pos)]++] = c.index;
  }
  return lat;
}

std::optional<std::uint32_t> RetinaLattice::nearest_cell(Vec2 p) const {
  if (p.x * p.x + p.y * p.y > radius * radius) return std::nullopt;

  const int bx = bucket_coord(p.x, grid_min, grid_dim);
  const int by = bucket_coord(p.y, grid_min, grid_dim);
  const int grid_max = grid_min + grid_dim - 1;

  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_idx = std::numeric_limits<std::uint32_t>::max();

  auto scan_bucket = [&](int cx, int cy) {
    if (cx < grid_min || cx > grid_max || cy < grid_min || cy > grid_max)
      return;
    const std::size_t b = static_cast<std::size_t>(cy - grid_min) * grid_dim +
                          (cx - grid_min);
    for (std::uint32_t k = bucket_offsets[b]; k < bucket_offsets[b + 1]; ++k) {
      const std::uint32_t idx = bucket_cells[k];
      const Vec2& q = cells[idx].pos;
      const double dx = q.x - p.x;
      const double dy = q.y - p.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2 || (d2 == best_d2 && idx < best_idx)) {
        best_d2 = d2;
        best_idx = idx;
      }
    }
  };

  for (int ring = 0; ring <= grid_dim; ++ring) {
    if (ring == 0) {
      scan_bucket(bx, by);
    } else {
      for (int cx = bx - ring; cx <= bx + ring; ++cx) {
        scan_bucket(cx, by - ring);
        scan_bucket(cx, by + ring);
      }
      for (int cy = by - ring + 1; cy <= by + ring - 1; ++cy) {
        scan_bucket(bx - ring, cy);
        scan_bucket(bx + ring, cy);
      }
    }
    // Buckets beyond ring `ring` hold cells at distance >= ring; stop once
    // nothing out there can beat (or tie) the current best.
    if (best_idx != std::numeric_limits<std::uint32_t>::max() &&
        best_d2 < static_cast<double>(ring) * ring) {
      break;
    }
  }
  if (best_idx == std::numeric_limits<std::uint32_t>::max()) {
    return std::nullopt;  // unreachable for any built lattice
  }
  return best_idx;
}

NeighborTable neighbors(const RetinaLattice& lattice, double dendritic_radius) {
  if (!(dendritic_radius >= 1.0)) {
    throw std::invalid_argument("dendritic radius must be >= 1");
  }

  const double rho2 = dendritic_radius * dendritic_radius;
  const int reach = static_cast<int>(std::ceil(dendritic_radius));
  const int grid_max = lattice.grid_min + lattice.grid_dim - 1;

  NeighborTable table;
  table.offsets.assign(lattice.cell_count() + 1, 0);
  table.adjacency.reserve(lattice.cell_count() * 6);

  std::vector<std::uint32_t> found;
  for (const Cell& c : lattice.cells) {
    found.clear();
    const int bx = bucket_coord(c.pos.x, lattice.grid_min, lattice.grid_dim);
    const int by = bucket_coord(c.pos.y, lattice.grid_min, lattice.grid_dim);
    for (int cy = std::max(by - reach, lattice.grid_min);
         cy <= std::min(by + reach, grid_max); ++cy) {
      for (int cx = std::max(bx - reach, lattice.grid_min);
           cx <= std::min(bx + reach, grid_max); ++cx) {
        const std::size_t b =
            static_cast<std::size_t>(cy - lattice.grid_min) * lattice.grid_dim +
            (cx - lattice.grid_min);
        for (std::uint32_t k = lattice.bucket_offsets[b];
             k < lattice.bucket_offsets[b + 1]; ++k) {
          const std::uint32_t j = lattice.bucket_cells[k];
          if (j == c.index) continue;
          const double dx = lattice.cells[j].pos.x - c.pos.x;
          const double dy = lattice.cells[j].pos.y - c.pos.y;
          if (dx * dx + dy * dy <= rho2 + kGeomEps) found.push_back(j);
        }
      }
    }
    std::sort(found.begin(), found.end());
    table.offsets[c.index + 1] =
        table.offsets[c.index] + static_cast<std::uint32_t>(found.size());
    table.adjacency.insert(table.adjacency.end(), found.begin(), found.end());
  }
  return table;
}

}  // namespace rewave
