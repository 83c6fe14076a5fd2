#include "clockmem/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clockmem {

std::array<int32_t, 4> neighbor_indices(int i, int L) {
  if (L < 2) throw std::out_of_range("neighbor_indices: L must be >= 2");
  if (i < 0 || i >= L * L) {
    throw std::out_of_range("neighbor_indices: site " + std::to_string(i) +
                            " out of range for L=" + std::to_string(L));
  }
  const int r = i / L;
  const int c = i % L;
  const int right = r * L + (c + 1 == L ? 0 : c + 1);
  const int left = r * L + (c == 0 ? L - 1 : c - 1);
  const int down = (r + 1 == L ? 0 : r + 1) * L + c;
  const int up = (r == 0 ? L - 1 : r - 1) * L + c;
  return {right, left, down, up};
}

double reduce_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

SpinLattice::SpinLattice(const ModelParams& params) : params_(params) {
  params_.validate();
  n_sites_ = params_.n_sites();
  neighbors_.resize(n_sites_);
  for (int i = 0; i < n_sites_; ++i) neighbors_[i] = neighbor_indices(i, params_.L);
  census_.assign(params_.species_count(), 0);
  if (is_xy()) {
    bin_scale_ = params_.q_bin / kTwoPi;
    angles_.assign(n_sites_, 0.0);
    cos_values_.assign(n_sites_, 1.0);
    sin_values_.assign(n_sites_, 0.0);
  } else {
    spins_.assign(n_sites_, 0);
    cos_table_.resize(params_.q);
    for (int d = 0; d < params_.q; ++d) cos_table_[d] = std::cos(kTwoPi * d / params_.q);
  }
}

void SpinLattice::rebuild_caches() {
  if (is_xy()) {
    for (int i = 0; i < n_sites_; ++i) {
      cos_values_[i] = std::cos(angles_[i]);
      sin_values_[i] = std::sin(angles_[i]);
    }
  }
  census_.assign(params_.species_count(), 0);
  for (int i = 0; i < n_sites_; ++i) ++census_[species(i)];
  cached_energy_ = total_energy(*this);
  accepts_since_check_ = 0;
}

void SpinLattice::set_spin(int i, int32_t s_new) {
  if (is_xy()) throw std::invalid_argument("set_spin: lattice is continuous");
  if (i < 0 || i >= n_sites_) throw std::out_of_range("set_spin: bad site");
  if (s_new < 0 || s_new >= params_.q) throw std::invalid_argument("set_spin: bad state");
  apply_spin(i, s_new, energy_delta(i, s_new));
}

void SpinLattice::set_angle(int i, double theta_new) {
  if (!is_xy()) throw std::invalid_argument("set_angle: lattice is discrete");
  if (i < 0 || i >= n_sites_) throw std::out_of_range("set_angle: bad site");
  const double theta = reduce_angle(theta_new);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  apply_angle(i, theta, c, s, energy_delta(i, c, s));
}

double SpinLattice::energy_delta_angle(int i, double theta_new) const {
  const double theta = reduce_angle(theta_new);
  return energy_delta(i, std::cos(theta), std::sin(theta));
}

void SpinLattice::self_check() {
  const double fresh = total_energy(*this);
  if (std::abs(fresh - cached_energy_) > kEnergyDriftTolerance) {
    throw std::logic_error("SpinLattice: cached energy drifted by " +
                           std::to_string(fresh - cached_energy_));
  }
  std::vector<int64_t> counts(params_.species_count(), 0);
  for (int i = 0; i < n_sites_; ++i) ++counts[species(i)];
  if (counts != census_) throw std::logic_error("SpinLattice: census out of sync");
  cached_energy_ = fresh;
  accepts_since_check_ = 0;
}

SpinLattice build_lattice(const ModelParams& params, const FillSpec& fill) {
  SpinLattice lat(params);
  const int n = lat.n_sites();

  if (const auto* p = std::get_if<FillSpec::Polarized>(&fill.spec)) {
    if (params.is_xy()) {
      throw std::invalid_argument("build_lattice: discrete polarized fill on an XY lattice");
    }
    if (p->s0 < 0 || p->s0 >= params.q) {
      throw std::invalid_argument("build_lattice: polarized state " + std::to_string(p->s0) +
                                  " out of range for q=" + std::to_string(params.q));
    }
    lat.spins_.assign(n, p->s0);
  } else if (const auto* pa = std::get_if<FillSpec::PolarizedAngle>(&fill.spec)) {
    if (!params.is_xy()) {
      throw std::invalid_argument("build_lattice: angle fill on a discrete lattice");
    }
    lat.angles_.assign(n, reduce_angle(pa->theta0));
  } else if (const auto* u = std::get_if<FillSpec::UniformRandom>(&fill.spec)) {
    RngStream& rng = *u->stream;
    if (params.is_xy()) {
      for (int i = 0; i < n; ++i) lat.angles_[i] = rng.next_unit() * kTwoPi;
    } else {
      for (int i = 0; i < n; ++i) lat.spins_[i] = static_cast<int32_t>(rng.next_below(params.q));
    }
  } else if (const auto* es = std::get_if<FillSpec::ExplicitStates>(&fill.spec)) {
    if (params.is_xy()) {
      throw std::invalid_argument("build_lattice: discrete states given with q continuous");
    }
    if (static_cast<int>(es->states.size()) != n) {
      throw std::invalid_argument("build_lattice: expected " + std::to_string(n) +
                                  " states, got " + std::to_string(es->states.size()));
    }
    for (int32_t s : es->states) {
      if (s < 0 || s >= params.q) throw std::invalid_argument("build_lattice: state out of range");
    }
    lat.spins_ = es->states;
  } else if (const auto* ea = std::get_if<FillSpec::ExplicitAngles>(&fill.spec)) {
    if (!params.is_xy()) {
      throw std::invalid_argument("build_lattice: angle list given with finite q");
    }
    if (static_cast<int>(ea->angles.size()) != n) {
      throw std::invalid_argument("build_lattice: expected " + std::to_string(n) +
                                  " angles, got " + std::to_string(ea->angles.size()));
    }
    for (int i = 0; i < n; ++i) lat.angles_[i] = reduce_angle(ea->angles[i]);
  }

  lat.rebuild_caches();
  return lat;
}

double total_energy(const SpinLattice& lat) {
  const int n = lat.n_sites();
  double e = 0.0;
  if (lat.is_xy()) {
    const auto angles = lat.angles();
    for (int i = 0; i < n; ++i) {
      const auto& nb = lat.neighbors(i);
      e -= std::cos(angles[i] - angles[nb[0]]);  // right bond
      e -= std::cos(angles[i] - angles[nb[2]]);  // down bond
    }
  } else {
    const auto spins = lat.spins();
    for (int i = 0; i < n; ++i) {
      const auto& nb = lat.neighbors(i);
      e -= lat.cos_of_diff(lat.spin_difference(spins[i], spins[nb[0]]));
      e -= lat.cos_of_diff(lat.spin_difference(spins[i], spins[nb[2]]));
    }
  }
  return e;
}

}  // namespace clockmem
