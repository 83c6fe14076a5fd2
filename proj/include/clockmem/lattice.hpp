#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "clockmem/params.hpp"
#include "clockmem/rng.hpp"

namespace clockmem {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Periodic 4-neighborhood of site i on an L x L torus, row-major indexing.
// Order: right, left, down, up. Throws std::out_of_range on a bad index.
std::array<int32_t, 4> neighbor_indices(int i, int L);

// Reduce an angle to [0, 2*pi).
double reduce_angle(double theta);

// Initial state selector for build_lattice.
struct FillSpec {
  struct Polarized {
    int s0;
  };
  struct PolarizedAngle {
    double theta0;
  };
  struct UniformRandom {
    RngStream* stream;  // borrowed for the duration of the build
  };
  struct ExplicitStates {
    std::vector<int32_t> states;
  };
  struct ExplicitAngles {
    std::vector<double> angles;
  };

  std::variant<Polarized, PolarizedAngle, UniformRandom, ExplicitStates, ExplicitAngles> spec;

  static FillSpec polarized(int s0 = 0) { return {Polarized{s0}}; }
  static FillSpec polarized_angle(double theta0) { return {PolarizedAngle{theta0}}; }
  static FillSpec uniform_random(RngStream& stream) { return {UniformRandom{&stream}}; }
  static FillSpec explicit_states(std::vector<int32_t> s) { return {ExplicitStates{std::move(s)}}; }
  static FillSpec explicit_angles(std::vector<double> a) { return {ExplicitAngles{std::move(a)}}; }
};

// L x L periodic lattice of q-state (or continuous-angle) spins with cached
// total energy and a per-species census, both maintained incrementally and
// re-derived from scratch every kSelfCheckInterval accepted updates.
//
// Energy convention: H = -sum over the 2 L^2 directed right/down bonds of
// cos(theta_i - theta_j). Mutation is single-threaded by contract; instances
// may move between threads but are never shared for concurrent writes.
class SpinLattice {
 public:
  static constexpr uint64_t kSelfCheckInterval = 1'000'000;
  static constexpr double kEnergyDriftTolerance = 1e-6;

  const ModelParams& params() const { return params_; }
  int side() const { return params_.L; }
  int n_sites() const { return n_sites_; }
  bool is_xy() const { return params_.is_xy(); }

  int32_t spin(int i) const { return spins_[i]; }
  double angle(int i) const {
    return is_xy() ? angles_[i] : kTwoPi * spins_[i] / params_.q;
  }
  // Census species of site i: the spin value, or the angular bin for XY.
  int species(int i) const { return is_xy() ? bin_of(angles_[i]) : spins_[i]; }

  std::span<const int32_t> spins() const { return spins_; }
  std::span<const double> angles() const { return angles_; }

  double energy() const { return cached_energy_; }
  const std::vector<int64_t>& census() const { return census_; }

  const std::array<int32_t, 4>& neighbors(int i) const { return neighbors_[i]; }

  // cos(2*pi*d/q) lookup for a spin difference d in [0, q).
  double cos_of_diff(int32_t d) const { return cos_table_[d]; }

  int32_t spin_difference(int32_t a, int32_t b) const {
    int32_t d = a - b;
    return d < 0 ? d + params_.q : d;
  }

  int bin_of(double theta) const {
    int b = static_cast<int>(theta * bin_scale_);
    return b >= params_.q_bin ? params_.q_bin - 1 : b;
  }

  // Energy change from setting site i to s_new, from the four incident bonds.
  double energy_delta(int i, int32_t s_new) const {
    const int32_t s_old = spins_[i];
    const auto& nb = neighbors_[i];
    double d = 0.0;
    for (int k = 0; k < 4; ++k) {
      const int32_t sn = spins_[nb[k]];
      d += cos_table_[spin_difference(s_old, sn)] - cos_table_[spin_difference(s_new, sn)];
    }
    return d;
  }

  // XY variant; (cos_new, sin_new) must be the cosine/sine of the proposal.
  double energy_delta(int i, double cos_new, double sin_new) const {
    const auto& nb = neighbors_[i];
    double sum_cos = 0.0, sum_sin = 0.0;
    for (int k = 0; k < 4; ++k) {
      sum_cos += cos_values_[nb[k]];
      sum_sin += sin_values_[nb[k]];
    }
    return (cos_values_[i] - cos_new) * sum_cos + (sin_values_[i] - sin_new) * sum_sin;
  }

  double energy_delta_angle(int i, double theta_new) const;

  // Fast-path mutators for the dynamics loop: delta_e must equal the
  // energy_delta of the same move. Census and cached energy are updated
  // incrementally; the periodic self-check guards both.
  void apply_spin(int i, int32_t s_new, double delta_e) {
    --census_[spins_[i]];
    ++census_[s_new];
    spins_[i] = s_new;
    cached_energy_ += delta_e;
    if (++accepts_since_check_ >= kSelfCheckInterval) self_check();
  }

  void apply_angle(int i, double theta_new, double cos_new, double sin_new, double delta_e) {
    --census_[bin_of(angles_[i])];
    ++census_[bin_of(theta_new)];
    angles_[i] = theta_new;
    cos_values_[i] = cos_new;
    sin_values_[i] = sin_new;
    cached_energy_ += delta_e;
    if (++accepts_since_check_ >= kSelfCheckInterval) self_check();
  }

  // Validating mutators; compute the energy delta internally.
  void set_spin(int i, int32_t s_new);
  void set_angle(int i, double theta_new);

  // Recomputes energy and census from scratch and checks them against the
  // incrementally maintained values. Throws std::logic_error on divergence.
  void self_check();

 private:
  friend SpinLattice build_lattice(const ModelParams&, const FillSpec&);

  explicit SpinLattice(const ModelParams& params);
  void rebuild_caches();

  ModelParams params_;
  int n_sites_ = 0;
  double bin_scale_ = 0.0;
  std::vector<int32_t> spins_;        // finite q
  std::vector<double> angles_;        // XY
  std::vector<double> cos_values_;    // XY: cos(angle) per site
  std::vector<double> sin_values_;    // XY: sin(angle) per site
  std::vector<double> cos_table_;     // finite q: cos(2*pi*d/q)
  std::vector<std::array<int32_t, 4>> neighbors_;
  std::vector<int64_t> census_;
  double cached_energy_ = 0.0;
  uint64_t accepts_since_check_ = 0;
};

// Builds a lattice with the requested fill and the energy computed from
// scratch. Throws std::invalid_argument on fill/parameter mismatches
// (wrong list length, s0 out of range, discrete fill on an XY lattice, ...).
SpinLattice build_lattice(const ModelParams& params, const FillSpec& fill);

// Total energy recomputed from scratch over the right/down bond set.
double total_energy(const SpinLattice& lattice);

}  // namespace clockmem
