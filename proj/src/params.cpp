#include <homloc/params.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace homloc {

namespace {

void require_finite(double v, const char *name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace

void SourceWidths::validate() const {
  for (auto [v, n] : {std::pair{sigma_omega, "sigma_omega"},
                      std::pair{sigma_kx, "sigma_kx"},
                      std::pair{sigma_ky, "sigma_ky"}}) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string(n) + " must be finite and > 0");
  }
}

void DetectorModel::validate() const {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("gamma must lie in [0, 1]");
  for (auto [v, n] : {std::pair{delta_omega, "delta_omega"},
                      std::pair{delta_xp, "delta_xp"},
                      std::pair{delta_yp, "delta_yp"}}) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(n) + " must be finite and >= 0");
  }
  for (auto [v, n] : {std::pair{distance_d, "distance_d"},
                      std::pair{omega_ref, "omega_ref"}}) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string(n) + " must be finite and > 0");
  }
}

SphericalParams SphericalParams::make(double s, double theta, double phi) {
  require_finite(s, "s");
  if (s < 0.0) throw std::invalid_argument("s must be >= 0");
  SphericalParams out;
  out.s = s;
  if (s == 0.0) return out;  // angles undefined, zeroed

  require_finite(theta, "theta");
  if (theta < 0.0 || theta > std::numbers::pi / 2)
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  out.theta = theta;
  out.theta_defined = true;
  if (theta == 0.0) return out;  // phi undefined

  require_finite(phi, "phi");
  if (phi < 0.0 || phi >= 2 * std::numbers::pi)
    throw std::invalid_argument("phi must lie in [0, 2*pi)");
  out.phi = phi;
  out.phi_defined = true;
  return out;
}

Vec3 direction(const SphericalParams &sph) {
  const double st = std::sin(sph.theta);
  return {std::cos(sph.theta), st * std::cos(sph.phi), st * std::sin(sph.phi)};
}

ReducedSeparation to_reduced(const PhysicalSeparation &phys, const SourceWidths &widths) {
  widths.validate();
  require_finite(phys.delta_t, "delta_t");
  require_finite(phys.delta_x, "delta_x");
  require_finite(phys.delta_y, "delta_y");
  return {2.0 * widths.sigma_omega * phys.delta_t,
          2.0 * widths.sigma_kx * phys.delta_x,
          2.0 * widths.sigma_ky * phys.delta_y};
}

SphericalParams to_spherical(const ReducedSeparation &red) {
  require_finite(red.tau, "tau");
  require_finite(red.lambda_x, "lambda_x");
  require_finite(red.lambda_y, "lambda_y");

  const double s = std::sqrt(red.tau * red.tau + red.lambda_x * red.lambda_x +
                             red.lambda_y * red.lambda_y);
  SphericalParams out;
  out.s = s;
  if (s == 0.0) return out;

  Vec3 dir{red.tau / s, -red.lambda_x / s, -red.lambda_y / s};
  // Canonical sign: first nonzero component positive.
  if (dir.x0 < 0.0 || (dir.x0 == 0.0 && (dir.x1 < 0.0 || (dir.x1 == 0.0 && dir.x2 < 0.0))))
    dir = -dir;

  out.theta = std::acos(std::min(dir.x0, 1.0));
  out.theta_defined = true;
  if (dir.x1 == 0.0 && dir.x2 == 0.0) {
    out.theta = 0.0;
    return out;  // on-axis: phi undefined
  }
  double phi = std::atan2(dir.x2, dir.x1);
  if (phi < 0.0) phi += 2 * std::numbers::pi;
  if (phi >= 2 * std::numbers::pi) phi = 0.0;
  out.phi = phi;
  out.phi_defined = true;
  return out;
}

ReducedSeparation from_spherical(const SphericalParams &sph) {
  const Vec3 dir = direction(sph);
  return {sph.s * dir.x0, -sph.s * dir.x1, -sph.s * dir.x2};
}

void camera_to_momentum(double x_prime, double y_prime, double omega,
                        const DetectorModel &det, double &k_x, double &k_y) {
  det.validate();
  const double scale = omega / (kSpeedOfLight * det.distance_d);
  k_x = scale * x_prime;
  k_y = scale * y_prime;
}

void momentum_resolution(double k_x, double k_y, double x_prime, double y_prime,
                         double omega, const DetectorModel &det,
                         double &delta_kx, double &delta_ky) {
  det.validate();
  if (x_prime == 0.0 || y_prime == 0.0 || omega == 0.0)
    throw std::invalid_argument("momentum_resolution: x', y' and omega must be nonzero");
  const double rel_omega2 = (det.delta_omega / omega) * (det.delta_omega / omega);
  delta_kx = std::abs(k_x) * std::sqrt((det.delta_xp / x_prime) * (det.delta_xp / x_prime) + rel_omega2);
  delta_ky = std::abs(k_y) * std::sqrt((det.delta_yp / y_prime) * (det.delta_yp / y_prime) + rel_omega2);
}

FeasibilityReport feasibility_check(const DetectorModel &det, const SourceWidths &widths,
                                    const SphericalParams &sph, double margin) {
  det.validate();
  widths.validate();
  if (!std::isfinite(margin) || margin <= 0.0 || margin > 1.0)
    throw std::invalid_argument("margin must lie in (0, 1]");

  // Position resolutions map to momentum through the far-field Jacobian
  // omega_ref / (c d).
  const double jac = det.omega_ref / (kSpeedOfLight * det.distance_d);
  const Vec3 delta_kappa{det.delta_omega / (2.0 * widths.sigma_omega),
                         jac * det.delta_xp / (2.0 * widths.sigma_kx),
                         jac * det.delta_yp / (2.0 * widths.sigma_ky)};

  FeasibilityReport rep{};
  rep.resolution_ratio = std::max({delta_kappa.x0, delta_kappa.x1, delta_kappa.x2});
  rep.beat_checked = sph.s > 0.0;
  rep.beat_ratio = rep.beat_checked ? sph.s * std::abs(dot(delta_kappa, direction(sph))) : 0.0;
  rep.pass = rep.resolution_ratio <= margin && (!rep.beat_checked || rep.beat_ratio <= margin);
  return rep;
}

}  // namespace homloc
