#pragma once
#include <homloc/params.hpp>
#include <homloc/prob.hpp>

#include <array>
#include <cstdint>

namespace homloc {

/// @brief 3x3 symmetric information matrix over the parameter order
/// (s, theta, phi). Stored dense even though the model is diagonal.
struct FisherMatrix {
  std::array<double, 9> m{};

  double &at(int row, int col) { return m[static_cast<std::size_t>(3 * row + col)]; }
  double at(int row, int col) const { return m[static_cast<std::size_t>(3 * row + col)]; }

  static FisherMatrix diagonal(double ss, double tt, double pp) {
    FisherMatrix f;
    f.at(0, 0) = ss;
    f.at(1, 1) = tt;
    f.at(2, 2) = pp;
    return f;
  }
};

/// @brief Per-parameter Cramer-Rao lower bounds on estimator variance for a
/// sample of n measurements; +infinity where the information vanishes.
struct CrbReport {
  double crb_s;
  double crb_theta;  ///< rad^2
  double crb_phi;    ///< rad^2
  std::uint64_t n;
};

/// Beat-sensitivity factor nu^2 sin^2(x) / (1 - nu^2 cos^2(x)) in [0, 1].
/// At nu = 1 the removable 0/0 points take the continuity value 1; for
/// nu < 1 the zeros of sin give exactly 0.
double beta(Visibility nu, double x);

/// Quantum Fisher information matrix, diag(1, s^2, s^2 sin^2 theta) / 2.
FisherMatrix qfi(const SphericalParams &sph);

/// Fisher information density in the beat coordinate rho = kappa . lambda:
/// pi^{-1/2} e^{-rho^2} beta_nu(s rho) diag(rho^2, s^2/2, s^2 sin^2(theta)/2).
FisherMatrix fisher_density(double rho, const SphericalParams &sph, Visibility nu);

/// @brief Controls the fixed-node Gauss-Hermite integration of the Fisher
/// density. The convergence check compares the nodes-count rule against the
/// doubled rule; relative disagreement above check_tol raises numeric_error.
struct QuadratureConfig {
  int nodes = 201;
  double check_tol = 1e-9;
};

/// @brief Fisher information matrix of the momentum-resolved scheme,
/// gamma^2 * integral of the Fisher density.
///
/// Evaluated through the Poisson-kernel expansion of the beat factor,
/// beta_nu(x) = (1-w) - 2w sum_k q^k cos(2kx) with w = sqrt(1-nu^2) and
/// q = (1-w)/(1+w); every term integrates in closed form against the
/// Gaussian weight, so the series converges like q^k e^{-k^2 s^2} and is
/// summed to machine precision. At nu = 1 the series collapses to the exact
/// gamma^2 * qfi. (Plain Gauss-Hermite quadrature stalls here: the beat
/// factor has complex poles at distance acosh(1/nu)/s from the real axis.)
FisherMatrix fisher_resolved(const SphericalParams &sph, Visibility nu, double gamma);

/// Independent fixed-node Gauss-Hermite route to the same integrals; raises
/// numeric_error when the doubled rule disagrees beyond cfg.check_tol (which
/// happens for visibilities near 1 at moderate s, where the integrand's
/// complex poles defeat the rule).
FisherMatrix fisher_resolved_quadrature(const SphericalParams &sph, Visibility nu,
                                        double gamma, const QuadratureConfig &cfg = {});

/// Fisher information for s in the non-resolving scheme:
/// gamma^2 nu^2 (s^2/4) / (e^{s^2/2} - nu^2); the s -> 0 limit at nu = 1 is
/// gamma^2 / 2.
double fisher_nonresolving(double s, Visibility nu, double gamma);

/// Per-parameter bounds 1 / (n * F_jj) for the diagonal model.
CrbReport crb(const FisherMatrix &f, std::uint64_t n);

}  // namespace homloc
