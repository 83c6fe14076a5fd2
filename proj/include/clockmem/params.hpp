#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace clockmem {

// Distinguished q value selecting the XY (q -> infinity) limit.
inline constexpr int kContinuousQ = 0;

// Lattice parameters in units J = k_B = 1.
struct ModelParams {
  int L = 0;         // linear size, sites per side
  int q = 2;         // spin cardinality, or kContinuousQ for the XY limit
  double T = 1.0;    // temperature
  int q_bin = 6;     // census bins for continuous angles (XY only)

  bool is_xy() const { return q == kContinuousQ; }
  int n_sites() const { return L * L; }

  // Number of species tracked by the census: q states, or q_bin angular bins.
  int species_count() const { return is_xy() ? q_bin : q; }

  // Throws std::invalid_argument on a malformed parameter set.
  // L = 2 is accepted so the exact hitting-time solver can enumerate
  // 4-spin systems; note that on an L = 2 torus the two horizontal
  // (and vertical) neighbors of a site coincide, so each unordered
  // neighbor pair carries two bonds. Production runs use L >= 3.
  void validate() const;
};

inline void ModelParams::validate() const {
  if (L < 2) {
    throw std::invalid_argument("ModelParams: L must be >= 2, got " + std::to_string(L));
  }
  if (!is_xy() && q < 2) {
    throw std::invalid_argument("ModelParams: q must be >= 2 or continuous, got " + std::to_string(q));
  }
  if (std::isnan(T) || T < 0.0) {
    throw std::invalid_argument("ModelParams: T must be >= 0");
  }
  if (is_xy() && q_bin < 2) {
    throw std::invalid_argument("ModelParams: q_bin must be >= 2, got " + std::to_string(q_bin));
  }
}

}  // namespace clockmem
