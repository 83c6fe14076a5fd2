#include "clockmem/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clockmem {

FitResult fit_power_law(std::vector<ScalingPoint> points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_power_law: need at least 3 points");
  std::sort(points.begin(), points.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) { return a.L < b.L; });
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].mean_tau <= 0.0 || points[i].L <= 0.0)
      throw std::invalid_argument("fit_power_law: non-positive point");
    if (i > 0 && points[i].L == points[i - 1].L)
      throw std::invalid_argument("fit_power_law: duplicate L");
  }

  const size_t n = points.size();
  std::vector<double> x(n), y(n), w(n);
  bool weighted = true;
  for (const auto& p : points)
    if (p.stderr_tau <= 0.0) weighted = false;
  for (size_t i = 0; i < n; ++i) {
    x[i] = std::log(points[i].L);
    y[i] = std::log(points[i].mean_tau);
    const double rel = points[i].stderr_tau / points[i].mean_tau;
    w[i] = weighted ? 1.0 / (rel * rel) : 1.0;
  }

  double sw = 0, swx = 0, swy = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }

  FitResult fit;
  fit.weighted = weighted;
  fit.z = sxy / sxx;
  fit.log_amplitude = ybar - fit.z * xbar;

  double ss_res = 0, ss_tot = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.log_amplitude + fit.z * x[i]);
    ss_res += w[i] * r * r;
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot : 1.0;
  if (weighted) {
    // weights are inverse variances, so var(z) = 1 / S_xx
    fit.z_err = std::sqrt(1.0 / sxx);
  } else {
    fit.z_err = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  }

  for (size_t i = 0; i + 1 < n; ++i)
    fit.local_slopes.push_back((y[i + 1] - y[i]) / (x[i + 1] - x[i]));
  return fit;
}

const char* growth_class_name(GrowthClass g) {
  switch (g) {
    case GrowthClass::POLYNOMIAL_CONSISTENT: return "POLYNOMIAL-CONSISTENT";
    case GrowthClass::SUPER_POLYNOMIAL: return "SUPER-POLYNOMIAL";
    default: return "UNDETERMINED";
  }
}

GrowthClass growth_classifier(const std::vector<ScalingPoint>& points,
                              double margin) {
  if (points.size() < 4)
    throw std::invalid_argument("growth_classifier: need at least 4 points");
  const auto fit = fit_power_law(points);
  const auto& s = fit.local_slopes;
  const double lo = *std::min_element(s.begin(), s.end());
  const double hi = *std::max_element(s.begin(), s.end());
  if (hi - lo <= margin) return GrowthClass::POLYNOMIAL_CONSISTENT;
  const bool rising = std::is_sorted(s.begin(), s.end());
  if (rising && s.back() - s.front() > margin) return GrowthClass::SUPER_POLYNOMIAL;
  return GrowthClass::UNDETERMINED;
}

double mcs_to_seconds(double steps, double seconds_per_mcs) {
  if (steps < 0.0) throw std::invalid_argument("mcs_to_seconds: negative steps");
  return steps * seconds_per_mcs;
}

}  // namespace clockmem
