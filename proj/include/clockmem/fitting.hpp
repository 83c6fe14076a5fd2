#pragma once

#include <cstdint>
#include <vector>

namespace clockmem {

struct ScalingPoint {
  double L = 0;
  double mean_tau = 0.0;    // MCS
  double stderr_tau = 0.0;  // MCS
  uint64_t n = 0;           // realizations behind the mean
};

struct FitResult {
  double z = 0.0;      // exponent in tau ~ L^z
  double z_err = 0.0;
  double log_amplitude = 0.0;  // ln a
  double r_squared = 0.0;
  std::vector<double> local_slopes;  // adjacent-pair log-log slopes
  bool weighted = false;             // false when any stderr was 0
};

// Least squares of ln(mean_tau) on ln(L), weighted by the delta-method log
// errors (stderr/mean)^-2; falls back to an unweighted fit when any stderr
// is zero. Throws on fewer than 3 points, duplicate L, or non-positive mean.
FitResult fit_power_law(std::vector<ScalingPoint> points);

enum class GrowthClass { POLYNOMIAL_CONSISTENT, SUPER_POLYNOMIAL, UNDETERMINED };

const char* growth_class_name(GrowthClass g);

// Separates tau ~ L^z from super-polynomial growth by the spread of the
// local log-log slopes: flat within `margin` is polynomial-consistent, a
// monotone rise exceeding `margin` is super-polynomial, anything else is
// undetermined. Requires >= 4 points.
GrowthClass growth_classifier(const std::vector<ScalingPoint>& points,
                              double margin = 0.3);

// Default 1 MCS = 1 ps.
double mcs_to_seconds(double steps, double seconds_per_mcs = 1e-12);

}  // namespace clockmem
