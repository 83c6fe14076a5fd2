#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "clockmem/lattice.hpp"
#include "clockmem/params.hpp"

namespace clockmem {

// One snapshot along a trajectory.
struct ObservableSample {
  uint64_t t = 0;              // MCS
  double m = 0.0;              // magnetization magnitude, in [0,1]
  double theta = 0.0;          // polarization angle, in [0,2pi); 0 when m ~ 0
  double energy_per_site = 0.0;
  std::vector<int64_t> counts;  // per-species (finite q) or per-bin (XY)
};

struct Trajectory {
  ModelParams params;
  uint64_t sampling_interval = 1;  // MCS between samples
  uint64_t master_seed = 0;
  uint64_t realization_index = 0;
  std::vector<ObservableSample> samples;
};

// m e^{i theta} = (1/L^2) sum_j e^{i 2 pi s_j / q}. For finite q the sum is
// taken over the census so it is exactly consistent with the per-species
// counts. theta is reduced to [0,2pi) and defined as 0 when m < 1e-12
// (argument of a null vector).
std::pair<double, double> magnetization(const SpinLattice& lattice);

// Per-species (or per-bin) site counts; sums to L^2.
std::vector<int64_t> species_census(const SpinLattice& lattice);

// (q * theta / 2pi) mod q, as a real number in [0, q).
double effective_sector(double theta, int q);

// max_t E(t) - E(0) in total-energy units. Throws on an empty trajectory.
double max_energy_excursion(const Trajectory& trajectory);

// Captures the current lattice state as a sample at time t.
ObservableSample observe(const SpinLattice& lattice, uint64_t t);

}  // namespace clockmem
