#pragma once

#include <cstdint>
#include <vector>

#include "clockmem/lattice.hpp"
#include "clockmem/params.hpp"

namespace clockmem {

struct ClusterReport {
  int target = 0;                     // species (or bin) id
  std::vector<int64_t> cluster_sizes;  // sorted descending
  int64_t largest = 0;
  bool wraps_x = false;  // of the largest cluster
  bool wraps_y = false;
  int64_t n_clusters = 0;
};

// 4-connectivity same-species components on the torus, for one target
// species. Winding is detected by offset bookkeeping during union-find:
// a cluster wraps in x iff closing a cycle produces a nonzero accumulated
// x-displacement. Throws when target is outside the species range.
ClusterReport label_clusters(const SpinLattice& lattice, int target);

// Labels every species in one pass; returns one report per species id.
std::vector<ClusterReport> label_all_clusters(const SpinLattice& lattice);

// Peierls estimate 4/q^2 of the droplet percolation temperature.
// Heuristic only. Throws for the continuous (XY) model.
double peierls_percolation_temperature(int q);

// One equilibrium snapshot's cluster summary.
struct IslandSample {
  int L = 0;
  int sample_index = 0;
  int64_t largest_0 = 0;      // largest cluster of species/bin 0
  int64_t largest_non0 = 0;   // largest cluster over all other species
  int64_t n_clusters_0 = 0;
  bool wraps_x = false;  // of the largest species-0 cluster
  bool wraps_y = false;
  bool plurality_0 = false;  // census: species 0 still strictly largest
};

struct IslandScanRow {
  int L = 0;
  double mean_largest_0 = 0.0;
  double mean_largest_non0 = 0.0;
  // quantiles over samples: {min, p25, p50, p75, max}
  std::vector<int64_t> q_largest_0;
  std::vector<int64_t> q_largest_non0;
  double plurality_0_fraction = 0.0;
};

struct IslandScanResult {
  std::vector<IslandSample> samples;  // all L, in scan order
  std::vector<IslandScanRow> per_L;
};

// Equilibrium largest-cluster statistics per lattice size. Burn-in is
// 20 L^2 MCS from the polarized state, then n_samples snapshots spaced
// L^2 MCS apart (stream identity: (master_seed, index of L in L_list)).
IslandScanResult largest_island_scan(const ModelParams& params,
                                     const std::vector<int>& L_list,
                                     int n_samples, uint64_t master_seed);

}  // namespace clockmem
