#include "clockmem/clusters.hpp"

#include <algorithm>
#include <stdexcept>

#include "clockmem/experiments.hpp"
#include "clockmem/metropolis.hpp"
#include "clockmem/rng.hpp"

namespace clockmem {

namespace {

// Union-find over lattice sites carrying the displacement of each node
// relative to its root. Closing a cycle with a nonzero net displacement
// witnesses a winding around the torus.
struct WindingForest {
  std::vector<int32_t> parent;
  std::vector<int32_t> rank;
  std::vector<int32_t> off_x, off_y;  // displacement to parent
  std::vector<uint8_t> wrap_x, wrap_y;  // per root

  explicit WindingForest(int n)
      : parent(n), rank(n, 0), off_x(n, 0), off_y(n, 0),
        wrap_x(n, 0), wrap_y(n, 0) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  // Path-compressing find; accumulates the node's offset to the root.
  int find(int i, int32_t& ox, int32_t& oy) {
    if (parent[i] == i) {
      ox = 0;
      oy = 0;
      return i;
    }
    int32_t px = 0, py = 0;
    const int root = find(parent[i], px, py);
    off_x[i] += px;
    off_y[i] += py;
    parent[i] = root;
    ox = off_x[i];
    oy = off_y[i];
    return root;
  }

  // Unite i and j where j sits at displacement (dx, dy) from i.
  void unite(int i, int j, int32_t dx, int32_t dy) {
    int32_t oix, oiy, ojx, ojy;
    const int ri = find(i, oix, oiy);
    const int rj = find(j, ojx, ojy);
    // displacement of j relative to ri if the merge is consistent
    const int32_t jx = oix + dx, jy = oiy + dy;
    if (ri == rj) {
      if (jx != ojx) wrap_x[ri] = 1;
      if (jy != ojy) wrap_y[ri] = 1;
      return;
    }
    if (rank[ri] < rank[rj]) {
      // attach ri under rj: offset of ri is (position of i) - oix, with
      // positions measured relative to rj via j
      off_x[ri] = ojx - jx;
      off_y[ri] = ojy - jy;
      parent[ri] = rj;
      wrap_x[rj] |= wrap_x[ri];
      wrap_y[rj] |= wrap_y[ri];
    } else {
      off_x[rj] = jx - ojx;
      off_y[rj] = jy - ojy;
      parent[rj] = ri;
      wrap_x[ri] |= wrap_x[rj];
      wrap_y[ri] |= wrap_y[rj];
      if (rank[ri] == rank[rj]) ++rank[ri];
    }
  }
};

struct LabeledClusters {
  WindingForest forest;
  std::vector<int64_t> size;  // per root (indexed by site; nonzero at roots)

  explicit LabeledClusters(const SpinLattice& lattice)
      : forest(lattice.n_sites()), size(lattice.n_sites(), 0) {
    const int n = lattice.n_sites();
    for (int i = 0; i < n; ++i) {
      const int sp = lattice.species(i);
      const auto nb = lattice.neighbors(i);
      if (lattice.species(nb[0]) == sp) forest.unite(i, nb[0], 1, 0);  // right
      if (lattice.species(nb[2]) == sp) forest.unite(i, nb[2], 0, 1);  // down
    }
    int32_t ox, oy;
    for (int i = 0; i < n; ++i) ++size[forest.find(i, ox, oy)];
  }
};

ClusterReport report_for(const SpinLattice& lattice, LabeledClusters& lc,
                         int target) {
  ClusterReport rep;
  rep.target = target;
  int best_root = -1;
  int32_t ox, oy;
  for (int i = 0; i < lattice.n_sites(); ++i) {
    if (lattice.species(i) != target) continue;
    const int root = lc.forest.find(i, ox, oy);
    if (root != i) continue;  // each cluster is counted once, at its root
    rep.cluster_sizes.push_back(lc.size[root]);
    ++rep.n_clusters;
    if (lc.size[root] > rep.largest) {
      rep.largest = lc.size[root];
      best_root = root;
    }
  }
  std::sort(rep.cluster_sizes.rbegin(), rep.cluster_sizes.rend());
  if (best_root >= 0) {
    rep.wraps_x = lc.forest.wrap_x[best_root];
    rep.wraps_y = lc.forest.wrap_y[best_root];
  }
  return rep;
}

}  // namespace

ClusterReport label_clusters(const SpinLattice& lattice, int target) {
  const int n_species = lattice.params().species_count();
  if (target < 0 || target >= n_species)
    throw std::invalid_argument("label_clusters: target outside species range");
  LabeledClusters lc(lattice);
  return report_for(lattice, lc, target);
}

std::vector<ClusterReport> label_all_clusters(const SpinLattice& lattice) {
  LabeledClusters lc(lattice);
  std::vector<ClusterReport> out;
  const int n_species = lattice.params().species_count();
  out.reserve(n_species);
  for (int s = 0; s < n_species; ++s) out.push_back(report_for(lattice, lc, s));
  return out;
}

double peierls_percolation_temperature(int q) {
  if (q == kContinuousQ)
    throw std::invalid_argument(
        "peierls_percolation_temperature: undefined for the XY model");
  if (q < 2) throw std::invalid_argument("peierls_percolation_temperature: q < 2");
  return 4.0 / (static_cast<double>(q) * q);
}

namespace {

std::vector<int64_t> five_point(std::vector<int64_t> v) {
  std::sort(v.begin(), v.end());
  const auto at = [&](double f) {
    return v[static_cast<size_t>(f * (v.size() - 1) + 0.5)];
  };
  return {v.front(), at(0.25), at(0.5), at(0.75), v.back()};
}

}  // namespace

IslandScanResult largest_island_scan(const ModelParams& params,
                                     const std::vector<int>& L_list,
                                     int n_samples, uint64_t master_seed) {
  if (L_list.empty()) throw std::invalid_argument("largest_island_scan: empty L list");
  if (n_samples < 1) throw std::invalid_argument("largest_island_scan: n_samples < 1");

  IslandScanResult result;
  for (size_t li = 0; li < L_list.size(); ++li) {
    ModelParams p = params;
    p.L = L_list[li];
    p.validate();
    RngStream rng(master_seed, li);
    auto lat = build_lattice(p, memory_start_fill(p));
    SweepClock clock;
    const uint64_t burn_in = 20ull * p.n_sites();
    for (uint64_t t = 0; t < burn_in; ++t) sweep(lat, rng, clock);

    std::vector<int64_t> l0, ln0;
    int plurality_hits = 0;
    for (int s = 0; s < n_samples; ++s) {
      for (int t = 0; t < p.n_sites(); ++t) sweep(lat, rng, clock);
      const auto reports = label_all_clusters(lat);
      IslandSample sample;
      sample.L = p.L;
      sample.sample_index = s;
      sample.largest_0 = reports[0].largest;
      sample.n_clusters_0 = reports[0].n_clusters;
      sample.wraps_x = reports[0].wraps_x;
      sample.wraps_y = reports[0].wraps_y;
      for (size_t sp = 1; sp < reports.size(); ++sp)
        sample.largest_non0 = std::max(sample.largest_non0, reports[sp].largest);
      const auto& census = lat.census();
      sample.plurality_0 = true;
      for (size_t sp = 1; sp < census.size(); ++sp)
        if (census[sp] >= census[0]) sample.plurality_0 = false;
      plurality_hits += sample.plurality_0;
      l0.push_back(sample.largest_0);
      ln0.push_back(sample.largest_non0);
      result.samples.push_back(sample);
    }

    IslandScanRow row;
    row.L = p.L;
    for (auto v : l0) row.mean_largest_0 += v;
    for (auto v : ln0) row.mean_largest_non0 += v;
    row.mean_largest_0 /= n_samples;
    row.mean_largest_non0 /= n_samples;
    row.q_largest_0 = five_point(l0);
    row.q_largest_non0 = five_point(ln0);
    row.plurality_0_fraction = static_cast<double>(plurality_hits) / n_samples;
    result.per_L.push_back(row);
  }
  return result;
}

}  // namespace clockmem
