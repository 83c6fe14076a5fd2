#include "clockmem/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace clockmem {

std::pair<double, double> magnetization(const SpinLattice& lattice) {
  const auto& p = lattice.params();
  double x = 0.0, y = 0.0;
  if (p.is_xy()) {
    for (double a : lattice.angles()) {
      x += std::cos(a);
      y += std::sin(a);
    }
  } else {
    const auto& counts = lattice.census();
    for (int s = 0; s < p.q; ++s) {
      const double phi = kTwoPi * s / p.q;
      x += counts[s] * std::cos(phi);
      y += counts[s] * std::sin(phi);
    }
  }
  const int n = lattice.n_sites();
  x /= n;
  y /= n;
  const double m = std::hypot(x, y);
  const double theta = m < 1e-12 ? 0.0 : reduce_angle(std::atan2(y, x));
  return {m, theta};
}

std::vector<int64_t> species_census(const SpinLattice& lattice) {
  return lattice.census();
}

double effective_sector(double theta, int q) {
  const double qd = q;
  double v = std::fmod(qd * theta / kTwoPi, qd);
  if (v < 0.0) v += qd;
  if (v >= qd) v = 0.0;
  return v;
}

double max_energy_excursion(const Trajectory& trajectory) {
  if (trajectory.samples.empty())
    throw std::invalid_argument("max_energy_excursion: empty trajectory");
  const double e0 = trajectory.samples.front().energy_per_site;
  double peak = e0;
  for (const auto& s : trajectory.samples)
    if (s.energy_per_site > peak) peak = s.energy_per_site;
  return (peak - e0) * trajectory.params.n_sites();
}

ObservableSample observe(const SpinLattice& lattice, uint64_t t) {
  ObservableSample s;
  s.t = t;
  std::tie(s.m, s.theta) = magnetization(lattice);
  s.energy_per_site = lattice.energy() / lattice.n_sites();
  s.counts = lattice.census();
  return s;
}

}  // namespace clockmem
