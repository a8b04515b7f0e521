// Test-only numeric oracles, independent of the library's own integration
// paths: adaptive Gauss-Kronrod quadrature (1D and nested 3D) and chi-square
// goodness-of-fit machinery.
#pragma once

#include <homloc/prob.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracles {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

inline double integrate1d(const std::function<double(double)> &f, double a, double b,
                          double tol = 1e-11) {
  return GK::integrate(f, a, b, 12, tol);
}

// Nested adaptive integration of f(x, y, z) over [-r, r]^3.
inline double integrate3d(const std::function<double(double, double, double)> &f, double r,
                          double tol = 1e-9) {
  const auto outer = [&](double x) {
    const auto middle = [&](double y) {
      const auto inner = [&](double z) { return f(x, y, z); };
      return GK::integrate(inner, -r, r, 10, tol / 25);
    };
    return GK::integrate(middle, -r, r, 10, tol / 5);
  };
  return GK::integrate(outer, -r, r, 10, tol);
}

// kappa-integral of the resolved outcome density for a fixed outcome.
inline double resolved_density_mass(homloc::Outcome x, const homloc::SphericalParams &sph,
                                    homloc::Visibility nu, double gamma, double r = 8.0) {
  return integrate3d(
      [&](double xi, double kx, double ky) {
        return homloc::resolved_density(x, {xi, kx, ky}, sph, nu, gamma);
      },
      r);
}

struct ChiSquare {
  double statistic;
  std::size_t dof;
  double critical;  // quantile at the requested significance
  bool pass;
};

// Pearson statistic of observed counts against expected probabilities that sum
// to ~1 over the same cells; significance is the test size (e.g. 0.01).
inline ChiSquare chi_square_test(const std::vector<double> &observed,
                                 const std::vector<double> &expected_probability,
                                 double total_count, double significance) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = expected_probability[i] * total_count;
    const double diff = observed[i] - expected;
    stat += diff * diff / expected;
  }
  const std::size_t dof = observed.size() - 1;
  boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  const double critical = boost::math::quantile(dist, 1.0 - significance);
  return {stat, dof, critical, stat <= critical};
}

}  // namespace oracles
