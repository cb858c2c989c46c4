#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rewave {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Squared distances between hex-grid points are integers in exact
// arithmetic, so membership predicates (cell inside the disc, neighbor
// within the dendritic radius) compare against radius^2 + kGeomEps: the
// slack absorbs floating-point rounding at shell boundaries and is far too
// small to ever reach the next distance shell.
inline constexpr double kGeomEps = 1e-9;

struct Cell {
  std::uint32_t index = 0;
  int axial_q = 0;  // column
  int axial_r = 0;  // row
  Vec2 pos;
  bool boundary = false;  // within 1 unit of the disc edge
};

// Amacrine-cell sheet: pointy-top hexagonal grid with unit spacing, clipped
// to a disc of `radius` centred on the origin.  Rows are spaced sqrt(3)/2
// apart and alternate rows are offset by 0.5.  Cells are ordered by
// (axial_r, axial_q) and indexed densely from 0.
//
// A uniform bucket grid (1-unit buckets) backs nearest-cell queries.
// Immutable after construction; safe to share across threads.
struct RetinaLattice {
  double radius = 0.0;
  std::vector<Cell> cells;

  // bucket grid internals
  int grid_min = 0;  // bucket coordinate of the first bucket on each axis
  int grid_dim = 0;  // buckets per side
  std::vector<std::uint32_t> bucket_offsets;  // size grid_dim^2 + 1
  std::vector<std::uint32_t> bucket_cells;    // cell indices, ascending per bucket

  std::size_t cell_count() const { return cells.size(); }

  // Index of the cell closest to `p`, or nullopt when |p| > radius.
  // Ties break toward the lowest cell index.
  std::optional<std::uint32_t> nearest_cell(Vec2 p) const;
};

// Per-cell adjacency in CSR form: all other cells within the dendritic
// radius, ascending index order.  Symmetric by construction.
struct NeighborTable {
  std::vector<std::uint32_t> offsets;    // cell_count + 1
  std::vector<std::uint32_t> adjacency;  // flattened neighbor lists

  std::span<const std::uint32_t> of(std::uint32_t cell) const {
    return {adjacency.data() + offsets[cell],
            adjacency.data() + offsets[cell + 1]};
  }
  std::uint32_t degree(std::uint32_t cell) const {
    return offsets[cell + 1] - offsets[cell];
  }
  std::size_t cell_count() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
};

// Builds the lattice of all hex-grid points whose distance from the origin
// is <= radius.  Throws std::invalid_argument for radius < 1.
RetinaLattice build_lattice(double radius);

// Lists, for every cell, the cells within `dendritic_radius` of it.
// Throws std::invalid_argument for dendritic_radius < 1.
NeighborTable neighbors(const RetinaLattice& lattice, double dendritic_radius);

}  // namespace rewave
