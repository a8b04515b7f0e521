#pragma once
#include <homloc/params.hpp>

namespace homloc {

/// @brief The two categorical outcomes of one two-photon measurement:
/// A = anti-bunching (coincidence), B = bunching.
enum class Outcome { A, B };

/// Interference sign: alpha(A) = -1, alpha(B) = +1.
inline double alpha(Outcome x) { return x == Outcome::B ? 1.0 : -1.0; }

/// @brief Degree of indistinguishability of the photons in every degree of
/// freedom other than localization; 1 = identical, 0 = fully distinguishable.
struct Visibility {
  double nu;
  explicit Visibility(double v);
};

/// @brief One resolved two-photon detection: outcome label plus the measured
/// reduced momentum difference.
struct DetectionRecord {
  Outcome outcome;
  MomentumDifference kappa;
};

/// Probability split of the loss channel for two photons with per-photon
/// efficiency gamma.
struct LossSplit {
  double p0;  ///< both photons lost, (1-gamma)^2
  double p1;  ///< exactly one lost, 2 gamma (1-gamma)
  double p2;  ///< both detected, gamma^2
};

/// Quantum beating factor zeta_{X;nu}(u) = (1 + alpha(X) nu cos u) / 2.
/// zeta_A + zeta_B = 1 for every u.
double quantum_beat(Outcome x, Visibility nu, double u);

/// @brief Momentum-resolved outcome density
/// gamma^2 pi^{-3/2} exp(-|kappa|^2) zeta_{X;nu}(s kappa . lambda).
/// Integrates to gamma^2 over (X, kappa); divide by gamma^2 for the
/// conditional-on-detection density used by sampling and likelihood.
double resolved_density(Outcome x, const MomentumDifference &kappa,
                        const SphericalParams &sph, Visibility nu, double gamma);

/// Outcome probability for the non-resolving scheme,
/// gamma^2 (1 + alpha(X) nu exp(-s^2/4)) / 2; the kappa-marginal of
/// resolved_density.
double nonresolving_prob(Outcome x, double s, Visibility nu, double gamma);

/// Zero/one/two-photon detection probabilities; p0 + p1 + p2 = 1.
LossSplit loss_split(double gamma);

/// @brief Gaussian beats envelope
/// (4 pi)^{-3/2} (sw sx sy)^{-1} exp(-dw^2/4sw^2 - dkx^2/4sx^2 - dky^2/4sy^2),
/// in physical momentum units. Normalized to unit integral.
double gaussian_envelope(double delta_omega, double delta_kx, double delta_ky,
                         const SourceWidths &widths);

}  // namespace homloc
