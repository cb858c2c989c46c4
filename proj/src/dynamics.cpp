#include "rewave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rewave {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Draw slots per cell per step: 0 = activation, 1 = refractory duration.
constexpr std::uint64_t kSlotsPerCell = 2;

constexpr std::uint64_t draw_counter(int cur_step, std::size_t n_cells,
                                     std::uint32_t cell, std::uint64_t slot) {
  return (static_cast<std::uint64_t>(cur_step) * n_cells + cell) *
             kSlotsPerCell +
         slot;
}

}  // namespace

void WaveParams::validate() const {
  require(dendritic_radius >= 1.0, "dendritic_radius must be >= 1");
  require(activation_threshold > 0.0 && activation_threshold <= 1.0,
          "activation_threshold must be in (0,1]");
  require(propagation_prob > 0.0 && propagation_prob <= 1.0,
          "propagation_prob must be in (0,1]");
  require(active_duration >= 1.0, "active_duration must be >= 1");
  require(refractory_mean >= 1.0, "refractory_mean must be >= 1");
  require(spontaneous_rate >= 0.0 && spontaneous_rate <= 0.01,
          "spontaneous_rate must be in [0,0.01]");
}

void GlobalDynamicsConfig::validate() const {
  require(refractory_jitter >= 0.0 && refractory_jitter < 1.0,
          "refractory_jitter must be in [0,1)");
  require(calcium_decay > 0.0, "calcium_decay must be positive");
  require(max_steps >= 1, "max_steps must be >= 1");
}

std::size_t SimulationFrame::active_count() const {
  return static_cast<std::size_t>(
      std::count(state.begin(), state.end(), CellState::kActive));
}

SimulationFrame init_state(const RetinaLattice& lattice) {
  SimulationFrame f;
  const std::size_t n = lattice.cell_count();
  f.step = 0;
  f.state.assign(n, CellState::kReady);
  f.active_timer.assign(n, 0);
  f.refractory_timer.assign(n, 0);
  f.calcium.assign(n, 0.0);
  return f;
}

int round_timer(double v) {
  const double r = std::floor(v + 0.5);  // half-up
  return r < 1.0 ? 1 : static_cast<int>(r);
}

std::size_t step_into(const SimulationFrame& cur, SimulationFrame& next,
                      const NeighborTable& nbr, const WaveParams& p,
                      const GlobalDynamicsConfig& g, const rng::Stream& stream,
                      StepWorkspace& ws) {
  const std::size_t n = cur.state.size();
  next.step = cur.step + 1;
  next.state.resize(n);
  next.active_timer.resize(n);
  next.refractory_timer.resize(n);
  next.calcium.resize(n);
  next.spontaneous.clear();

  const double decay = std::exp(-1.0 / g.calcium_decay);
  const int fresh_active = round_timer(p.active_duration);
  const double refr_lo = p.refractory_mean * (1.0 - g.refractory_jitter);
  const double refr_hi = p.refractory_mean * (1.0 + g.refractory_jitter);
  const bool can_spont = p.spontaneous_rate > 0.0;

  // Scatter active-neighbor counts from the active cells; the table is
  // symmetric, so this matches counting active entries in each READY
  // cell's own list while costing O(active) instead of O(ready).
  ws.hot.assign(n, 0);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (cur.state[j] == CellState::kActive) {
      for (std::uint32_t i : nbr.of(j)) ++ws.hot[i];
    }
  }

  std::size_t active = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    switch (cur.state[i]) {
      case CellState::kReady: {
        const std::uint16_t hot = ws.hot[i];
        const std::uint32_t degree = nbr.degree(i);
        // drive 0 never reaches the threshold: theta is strictly positive
        const bool driven =
            hot > 0 && degree > 0 &&
            static_cast<double>(hot) / degree >= p.activation_threshold;
        // unused draw slots cost nothing: the stream is counter-addressed
        bool fires = false;
        if (driven) {
          fires = stream.uniform01(draw_counter(cur.step, n, i, 0)) <
                  p.propagation_prob;
        } else if (can_spont) {
          fires = stream.uniform01(draw_counter(cur.step, n, i, 0)) <
                  p.spontaneous_rate;
        }
        if (fires) {
          next.state[i] = CellState::kActive;
          next.active_timer[i] = fresh_active;
          next.refractory_timer[i] = 0;
          next.calcium[i] = 1.0;
          if (!driven) next.spontaneous.push_back(i);
          ++active;
        } else {
          next.state[i] = CellState::kReady;
          next.active_timer[i] = 0;
          next.refractory_timer[i] = 0;
          next.calcium[i] = cur.calcium[i] * decay;
        }
        break;
      }
      case CellState::kActive: {
        if (cur.active_timer[i] == 1) {
          const double u =
              stream.uniform01(draw_counter(cur.step, n, i, 1));
          next.state[i] = CellState::kRefractory;
          next.active_timer[i] = 0;
          next.refractory_timer[i] =
              round_timer(refr_lo + u * (refr_hi - refr_lo));
          next.calcium[i] = cur.calcium[i];  // leaves ACTIVE at 1; decays
                                             // from the following step
        } else {
          next.state[i] = CellState::kActive;
          next.active_timer[i] = cur.active_timer[i] - 1;
          next.refractory_timer[i] = 0;
          next.calcium[i] = 1.0;
          ++active;
        }
        break;
      }
      case CellState::kRefractory: {
        if (cur.refractory_timer[i] == 1) {
          next.state[i] = CellState::kReady;
          next.refractory_timer[i] = 0;
        } else {
          next.state[i] = CellState::kRefractory;
          next.refractory_timer[i] = cur.refractory_timer[i] - 1;
        }
        next.active_timer[i] = 0;
        next.calcium[i] = cur.calcium[i] * decay;
        break;
      }
    }
  }
  return active;
}

std::size_t step_into(const SimulationFrame& cur, SimulationFrame& next,
                      const NeighborTable& nbr, const WaveParams& p,
                      const GlobalDynamicsConfig& g,
                      const rng::Stream& stream) {
  StepWorkspace ws;
  return step_into(cur, next, nbr, p, g, stream, ws);
}

SimulationFrame step(const SimulationFrame& cur, const NeighborTable& nbr,
                     const WaveParams& p, const GlobalDynamicsConfig& g,
                     const rng::Stream& stream) {
  SimulationFrame next;
  step_into(cur, next, nbr, p, g, stream);
  return next;
}

int run_episode(const RetinaLattice& lattice, const NeighborTable& nbr,
                const WaveParams& p, const GlobalDynamicsConfig& g,
                std::uint64_t seed,
                const std::function<bool(const SimulationFrame&)>& sink) {
  p.validate();
  g.validate();
  const rng::Stream stream(seed);
  StepWorkspace ws;

  SimulationFrame cur = init_state(lattice);
  SimulationFrame next = cur;
  int frames = 1;
  int last_active_step = 0;
  if (!sink(cur)) return frames;

  for (int s = 1; s <= g.max_steps; ++s) {
    const std::size_t active = step_into(cur, next, nbr, p, g, stream, ws);
    std::swap(cur, next);
    ++frames;
    if (!sink(cur)) break;
    if (active > 0) {
      last_active_step = cur.step;
    } else if (cur.step - last_active_step >= kQuietGraceSteps) {
      break;
    }
  }
  return frames;
}

std::vector<SimulationFrame> simulate_episode(const RetinaLattice& lattice,
                                              const NeighborTable& nbr,
                                              const WaveParams& p,
                                              const GlobalDynamicsConfig& g,
                                              std::uint64_t seed) {
  std::vector<SimulationFrame> frames;
  run_episode(lattice, nbr, p, g, seed, [&](const SimulationFrame& f) {
    frames.push_back(f);
    return true;
  });
  return frames;
}

}  // namespace rewave
