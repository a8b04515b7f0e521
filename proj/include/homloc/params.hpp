#pragma once
#include <homloc/vec3.hpp>

namespace homloc {

/// Exact SI speed of light (m/s), used by the far-field camera mapping.
inline constexpr double kSpeedOfLight = 299792458.0;

/// @brief Standard deviations of the Gaussian single-photon momentum
/// distribution, one per measured component.
struct SourceWidths {
  double sigma_omega;  ///< frequency std-dev (rad/s)
  double sigma_kx;     ///< transverse-momentum std-dev along x (rad/m)
  double sigma_ky;     ///< transverse-momentum std-dev along y (rad/m)

  /// Throws std::invalid_argument unless all widths are finite and > 0.
  void validate() const;
};

/// @brief Physical localization differences between the two emitters.
struct PhysicalSeparation {
  double delta_t;  ///< emission-time difference t2 - t1 (s)
  double delta_x;  ///< transverse offset x2 - x1 (m)
  double delta_y;  ///< transverse offset y2 - y1 (m)
};

/// @brief Dimensionless separation, widths-scaled: tau = 2*sigma_omega*dt,
/// lambda_x = 2*sigma_kx*dx, lambda_y = 2*sigma_ky*dy.
struct ReducedSeparation {
  double tau;
  double lambda_x;
  double lambda_y;
};

/// @brief Magnitude/direction form of the reduced separation; the parameters
/// the protocol estimates.
///
/// Canonical domain: s >= 0, theta in [0, pi/2], phi in [0, 2*pi). The
/// direction is undefined at s = 0 and phi is undefined at theta = 0; both
/// cases carry explicit flags so downstream statistics can exclude them
/// (the numeric fields are zeroed when flagged).
struct SphericalParams {
  double s = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  bool theta_defined = false;
  bool phi_defined = false;

  /// Validated constructor; throws std::invalid_argument outside the
  /// canonical domain. Sets the undefined flags for s = 0 / theta = 0.
  static SphericalParams make(double s, double theta, double phi);
};

/// Unit direction vector (cos theta, sin theta cos phi, sin theta sin phi).
/// Undefined angles read as 0, giving the frequency axis by convention.
Vec3 direction(const SphericalParams &sph);

/// @brief Per-event measured momentum difference in reduced units,
/// kappa = (xi, kappa_x, kappa_y).
struct MomentumDifference {
  double xi;
  double kappa_x;
  double kappa_y;
};

inline Vec3 as_vec(const MomentumDifference &k) { return {k.xi, k.kappa_x, k.kappa_y}; }

/// @brief Detection chain model: efficiency, measurement resolutions and
/// far-field geometry.
struct DetectorModel {
  double gamma;        ///< detector efficiency, in [0, 1]
  double delta_omega;  ///< frequency resolution (rad/s)
  double delta_xp;     ///< camera position resolution along x' (m)
  double delta_yp;     ///< camera position resolution along y' (m)
  double distance_d;   ///< camera distance from the beam splitter (m)
  double omega_ref;    ///< operating frequency used by the feasibility
                       ///< mapping of position resolutions to momentum (rad/s)

  void validate() const;
};

/// @brief Outcome of the resolution feasibility screen.
///
/// resolution_ratio is the largest component of the reduced resolution vector
/// delta_kappa; beat_ratio is s * |delta_kappa . lambda|. Both are compared
/// inclusively against the margin. When s = 0 there are no beats to resolve:
/// the second condition passes trivially and beat_checked is false.
struct FeasibilityReport {
  bool pass;
  double resolution_ratio;
  double beat_ratio;
  bool beat_checked;
};

/// Widths-scaled reduction of a physical separation.
ReducedSeparation to_reduced(const PhysicalSeparation &phys, const SourceWidths &widths);

/// @brief Magnitude/direction form of a reduced separation.
///
/// s = sqrt(tau^2 + lambda_x^2 + lambda_y^2) and the direction is
/// (tau, -lambda_x, -lambda_y)/s, canonicalized by a global sign flip so that
/// its first nonzero component is positive; the flip is legitimate because
/// opposite directions produce identical outcome densities. Returns the
/// undefined-flagged origin when s = 0.
SphericalParams to_spherical(const ReducedSeparation &red);

/// Inverse of to_spherical on the canonical domain.
ReducedSeparation from_spherical(const SphericalParams &sph);

/// Far-field mapping camera position -> transverse momentum:
/// (k_x, k_y) = omega * (x', y') / (c * d).
void camera_to_momentum(double x_prime, double y_prime, double omega,
                        const DetectorModel &det, double &k_x, double &k_y);

/// Momentum resolution from position/frequency resolutions:
/// delta_k^2 = k^2 (delta_p^2/p^2 + delta_omega^2/omega^2).
/// Throws std::invalid_argument when x', y' or omega is zero.
void momentum_resolution(double k_x, double k_y, double x_prime, double y_prime,
                         double omega, const DetectorModel &det,
                         double &delta_kx, double &delta_ky);

/// @brief Checks that the detector resolves both the momentum distribution
/// and the beats: max(delta_kappa) <= margin and |delta_kappa . lambda| <= margin/s.
/// margin must lie in (0, 1].
FeasibilityReport feasibility_check(const DetectorModel &det, const SourceWidths &widths,
                                    const SphericalParams &sph, double margin);

}  // namespace homloc
