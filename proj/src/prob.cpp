#include <homloc/prob.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homloc {

namespace {

void require_efficiency(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in [0, 1]");
}

}  // namespace

Visibility::Visibility(double v) : nu(v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0)
    throw std::invalid_argument("visibility must lie in [0, 1]");
}

double quantum_beat(Outcome x, Visibility nu, double u) {
  return 0.5 * (1.0 + alpha(x) * nu.nu * std::cos(u));
}

double resolved_density(Outcome x, const MomentumDifference &kappa,
                        const SphericalParams &sph, Visibility nu, double gamma) {
  require_efficiency(gamma);
  const Vec3 k = as_vec(kappa);
  const double phase = sph.s > 0.0 ? sph.s * dot(k, direction(sph)) : 0.0;
  constexpr double inv_pi_32 = 0.17958712212516656;  // pi^{-3/2}
  return gamma * gamma * inv_pi_32 * std::exp(-norm_squared(k)) * quantum_beat(x, nu, phase);
}

double nonresolving_prob(Outcome x, double s, Visibility nu, double gamma) {
  require_efficiency(gamma);
  if (!(s >= 0.0)) throw std::invalid_argument("s must be >= 0");
  return 0.5 * gamma * gamma * (1.0 + alpha(x) * nu.nu * std::exp(-0.25 * s * s));
}

LossSplit loss_split(double gamma) {
  require_efficiency(gamma);
  return {(1.0 - gamma) * (1.0 - gamma), 2.0 * gamma * (1.0 - gamma), gamma * gamma};
}

double gaussian_envelope(double delta_omega, double delta_kx, double delta_ky,
                         const SourceWidths &widths) {
  widths.validate();
  const double norm = std::pow(4.0 * std::numbers::pi, -1.5) /
                      (widths.sigma_omega * widths.sigma_kx * widths.sigma_ky);
  const double ew = delta_omega / (2.0 * widths.sigma_omega);
  const double ex = delta_kx / (2.0 * widths.sigma_kx);
  const double ey = delta_ky / (2.0 * widths.sigma_ky);
  return norm * std::exp(-(ew * ew + ex * ex + ey * ey));
}

}  // namespace homloc
