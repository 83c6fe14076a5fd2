#pragma once

#include <cmath>
#include <cstdint>

#include "clockmem/lattice.hpp"
#include "clockmem/rng.hpp"

namespace clockmem {

// Elapsed simulation time. One Monte Carlo step (MCS) is one sweep of
// L^2 attempted single-spin updates.
struct SweepClock {
  uint64_t mcs = 0;
  uint64_t attempts = 0;
  uint64_t accepts = 0;
};

// Metropolis rate min(1, exp(-delta_e / T)); at T = 0 moves are accepted
// iff they do not raise the energy.
inline double acceptance_probability(double delta_e, double temperature) {
  if (temperature == 0.0) return delta_e <= 0.0 ? 1.0 : 0.0;
  if (delta_e <= 0.0) return 1.0;
  return std::exp(-delta_e / temperature);
}

// One attempted single-spin update. Consumes exactly three u64 draws, in
// this order:
//   1. site        = next_below(L^2)
//   2. proposal    = next_below(q - 1) mapped to (s + 1 + draw) mod q for
//                    finite q, or next_unit() * 2*pi for the XY limit
//   3. acceptance  = next_unit(), drawn even when the move is downhill
// The fixed draw discipline keeps trajectories bit-reproducible.
inline bool metropolis_attempt(SpinLattice& lat, RngStream& rng) {
  const double temperature = lat.params().T;
  const int site = static_cast<int>(rng.next_below(static_cast<uint64_t>(lat.n_sites())));

  if (lat.is_xy()) {
    double theta = rng.next_unit() * kTwoPi;
    if (theta >= kTwoPi) theta = 0.0;  // guard the final-ulp rounding case
    const double u = rng.next_unit();
    const double cos_new = std::cos(theta);
    const double sin_new = std::sin(theta);
    const double delta_e = lat.energy_delta(site, cos_new, sin_new);
    if (delta_e <= 0.0 || u < std::exp(-delta_e / temperature)) {
      lat.apply_angle(site, theta, cos_new, sin_new, delta_e);
      return true;
    }
    return false;
  }

  const int q = lat.params().q;
  const int32_t hop = static_cast<int32_t>(rng.next_below(static_cast<uint64_t>(q - 1)));
  const int32_t s_old = lat.spin(site);
  int32_t s_new = s_old + 1 + hop;
  if (s_new >= q) s_new -= q;
  const double u = rng.next_unit();
  const double delta_e = lat.energy_delta(site, s_new);
  if (delta_e <= 0.0 || u < std::exp(-delta_e / temperature)) {
    lat.apply_spin(site, s_new, delta_e);
    return true;
  }
  return false;
}

// One MCS: exactly L^2 attempts.
inline void sweep(SpinLattice& lat, RngStream& rng, SweepClock& clock) {
  const int n = lat.n_sites();
  uint64_t accepted = 0;
  for (int k = 0; k < n; ++k) accepted += metropolis_attempt(lat, rng) ? 1 : 0;
  clock.mcs += 1;
  clock.attempts += static_cast<uint64_t>(n);
  clock.accepts += accepted;
}

}  // namespace clockmem
