#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rewave/lattice.hpp"
#include "rewave/rng.hpp"

namespace rewave {

enum class CellState : std::uint8_t { kReady = 0, kActive = 1, kRefractory = 2 };

// One parameter combination = one dataset class.  Each field steers one
// aspect of the waves: size, shape, speed, duration, spacing, initiation.
struct WaveParams {
  double dendritic_radius = 1.5;      // lattice units; wave size
  double activation_threshold = 0.25; // fraction of neighbors; wave shape
  double propagation_prob = 0.8;      // wave speed
  double active_duration = 2.0;       // timesteps; wave duration
  double refractory_mean = 40.0;      // timesteps; wave spacing
  double spontaneous_rate = 1e-4;     // per cell per step; initiation

  void validate() const;  // throws std::invalid_argument out of range
};

// Model constants that do not vary across classes.
struct GlobalDynamicsConfig {
  double refractory_jitter = 0.2;  // fraction of refractory_mean, [0,1)
  double calcium_decay = 10.0;     // timesteps
  int max_steps = 2000;            // per episode

  void validate() const;
};

// Steps with no active cell tolerated before an episode ends early.
inline constexpr int kQuietGraceSteps = 200;

// Full cell-sheet state at one timestep of one episode.
struct SimulationFrame {
  int step = 0;
  std::vector<CellState> state;
  std::vector<int> active_timer;      // > 0 iff ACTIVE
  std::vector<int> refractory_timer;  // > 0 iff REFRACTORY
  std::vector<double> calcium;        // [0,1]; exactly 1 while ACTIVE
  std::vector<std::uint32_t> spontaneous;  // spontaneously fired this step

  std::size_t active_count() const;
};

SimulationFrame init_state(const RetinaLattice& lattice);

// Timer values round half-up with a floor of 1.
int round_timer(double v);

// Reusable scratch so stepping allocates nothing after warmup.
struct StepWorkspace {
  std::vector<std::uint16_t> hot;  // active neighbors per cell
};

// One synchronous update: every transition reads `cur` only.  Draw slots are
// addressed by (step, cell, slot), so the result is independent of iteration
// order and of which branches actually consume a draw.  Returns the number
// of ACTIVE cells in `next`.
std::size_t step_into(const SimulationFrame& cur, SimulationFrame& next,
                      const NeighborTable& neighbors, const WaveParams& params,
                      const GlobalDynamicsConfig& globals,
                      const rng::Stream& stream, StepWorkspace& workspace);

std::size_t step_into(const SimulationFrame& cur, SimulationFrame& next,
                      const NeighborTable& neighbors, const WaveParams& params,
                      const GlobalDynamicsConfig& globals,
                      const rng::Stream& stream);

SimulationFrame step(const SimulationFrame& cur, const NeighborTable& neighbors,
                     const WaveParams& params,
                     const GlobalDynamicsConfig& globals,
                     const rng::Stream& stream);

// Streams every frame of one episode (step 0 first) into `sink` and returns
// the number of frames emitted.  Ends at max_steps, earlier once no cell has
// been ACTIVE for kQuietGraceSteps consecutive steps, or as soon as `sink`
// returns false.  Stopping early never changes the frames already emitted.
int run_episode(const RetinaLattice& lattice, const NeighborTable& neighbors,
                const WaveParams& params, const GlobalDynamicsConfig& globals,
                std::uint64_t seed,
                const std::function<bool(const SimulationFrame&)>& sink);

// Same episode, collected.  Identical (inputs, seed) give bit-identical
// frame sequences.
std::vector<SimulationFrame> simulate_episode(const RetinaLattice& lattice,
                                              const NeighborTable& neighbors,
                                              const WaveParams& params,
                                              const GlobalDynamicsConfig& globals,
                                              std::uint64_t seed);

}  // namespace rewave
